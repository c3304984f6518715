//! Isotropic vectors and subspaces: bounded search, hyperbolic completion,
//! dual isotropic complements and the derived constructions used by the
//! chain builders.

use crate::arith::{Matrix, Rational, Scalar, Subspace};
use crate::error::{Error, Result};
use crate::forms::{FormKind, FormSpace};

/// Bounds for the integer-vector searches.
///
/// Shells `h = 1, 2, …` are searched in order up to `max_height`;
/// `height_bound` is the cap of the first pass and never changes the
/// result, only where a caller may choose to stop early.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchConfig {
    pub height_bound: u32,
    pub max_height: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            height_bound: 10,
            max_height: 50,
        }
    }
}

impl SearchConfig {
    pub fn new(height_bound: u32, max_height: u32) -> Result<Self> {
        if height_bound == 0 || max_height == 0 || height_bound > max_height {
            return Err(Error::PreconditionFailed(format!(
                "need 0 < height ({height_bound}) <= max height ({max_height})"
            )));
        }
        Ok(SearchConfig {
            height_bound,
            max_height,
        })
    }

    pub fn with_max_height(max_height: u32) -> Self {
        SearchConfig {
            height_bound: max_height.min(10),
            max_height,
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Calls `visit` on every primitive integer vector of length `m` with
/// max-norm exactly `h` and first nonzero entry positive, in descending
/// lexicographic order. Stops at the first `Some`.
fn walk_shell<T>(m: usize, h: i64, mut visit: impl FnMut(&[i64]) -> Option<T>) -> Option<T> {
    if m == 0 {
        return None;
    }
    let mut c = vec![h; m];
    loop {
        let top = c.iter().any(|x| x.abs() == h);
        let sign_ok = c.iter().find(|x| **x != 0).is_some_and(|x| *x > 0);
        if top && sign_ok && c.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
            if let Some(t) = visit(&c) {
                return Some(t);
            }
        }
        // odometer step towards -h, last coordinate fastest
        let mut k = m;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if c[k] > -h {
                c[k] -= 1;
                for x in c.iter_mut().skip(k + 1) {
                    *x = h;
                }
                break;
            }
        }
        // once the leading coordinate is negative, sign normalization
        // rejects everything that remains
        if c[0] < 0 {
            return None;
        }
    }
}

/// First vector `x·B` (for the rows `B` of `basis`) satisfying `accept`,
/// over primitive integer coefficient vectors `x` in increasing max-norm
/// shells. Over `ℚ(√−D)` each coefficient contributes two integer
/// coordinates `a + b√−D`.
pub fn search_in_span<S: Scalar>(
    basis: &Matrix<S>,
    cfg: &SearchConfig,
    mut accept: impl FnMut(&[S]) -> bool,
) -> Option<Vec<S>> {
    let ctx = basis.ctx();
    let k = basis.rows();
    let r = S::INTEGRAL_RANK;
    for h in 1..=i64::from(cfg.max_height) {
        let hit = walk_shell(k * r, h, |ints| {
            let coeffs: Vec<S> = ints.chunks(r).map(|p| S::from_integers(p, ctx)).collect();
            let v = basis.vec_mul(&coeffs);
            accept(&v).then_some(v)
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// A nonzero isotropic vector with primitive integer coordinates of least
/// max-norm (descending lexicographic within the shell), or `None` when
/// there is none up to `cfg.max_height`.
pub fn find_isotropic_vector<S: Scalar>(space: &FormSpace<S>, cfg: &SearchConfig) -> Option<Vec<S>> {
    let ctx = space.ctx();
    if space.kind() == FormKind::Alternating {
        let mut e = vec![S::zero(ctx); space.dim()];
        *e.first_mut()? = S::one(ctx);
        return Some(e);
    }
    search_in_span(&Matrix::identity(space.dim(), ctx), cfg, |v| space.norm(v).is_zero())
}

fn check_isotropic_vector<S: Scalar>(space: &FormSpace<S>, v: &[S]) -> Result<()> {
    if v.len() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} in a space of dimension {}",
            v.len(),
            space.dim()
        )));
    }
    if v.iter().all(Scalar::is_zero) {
        return Err(Error::VectorInRadical);
    }
    if !space.norm(v).is_zero() {
        return Err(Error::VectorNotIsotropic);
    }
    Ok(())
}

/// Some `x` with `(yᵢ, x) = rhsᵢ` for the rows `yᵢ` of `constraints`.
fn solve_pairings<S: Scalar>(space: &FormSpace<S>, constraints: &Matrix<S>, rhs: &[S]) -> Option<Vec<S>> {
    // (y, x) = y·G·x̄ᵀ, so solve for x̄ and conjugate back
    let a = constraints.mul(space.gram());
    let conj_rhs: Vec<S> = rhs.iter().map(Scalar::conj).collect();
    a.solve(&conj_rhs).map(|x| x.iter().map(Scalar::conj).collect())
}

fn axpy<S: Scalar>(x: &[S], c: &S, y: &[S]) -> Vec<S> {
    x.iter().zip(y).map(|(a, b)| a.clone() + c.clone() * b).collect()
}

/// Half the norm of `x`, for the isotropy correction `x − ((x,x)/2)·w`.
fn half_norm<S: Scalar>(space: &FormSpace<S>, x: &[S]) -> S {
    let two = S::from_int(2, space.ctx());
    space.norm(x) * &two.inv().expect("2 is invertible")
}

/// A vector `w` with `(v, w) = 1` and `(w, w) = 0`.
pub fn hyperbolic_complete<S: Scalar>(space: &FormSpace<S>, v: &[S]) -> Result<Vec<S>> {
    check_isotropic_vector(space, v)?;
    let ctx = space.ctx();
    let row = Matrix::row_vector(v, ctx);
    let w0 = solve_pairings(space, &row, &[S::one(ctx)]).ok_or(Error::VectorInRadical)?;
    let c = half_norm(space, &w0);
    Ok(axpy(&w0, &-c, v))
}

/// Rows `x₁, …, x_k` spanning an isotropic subspace with `(wᵢ, xⱼ) = δᵢⱼ`
/// for the rows `wᵢ` of `w`, every `xⱼ` orthogonal to `avoid` (which must
/// be orthogonal to `w`).
pub fn dual_isotropic_basis<S: Scalar>(
    space: &FormSpace<S>,
    w: &Matrix<S>,
    avoid: Option<&Subspace<S>>,
) -> Result<Matrix<S>> {
    let ctx = space.ctx();
    let k = w.rows();
    let needed = 2 * k + avoid.map_or(0, Subspace::dim);
    if space.dim() < needed {
        return Err(Error::DimensionTooSmall {
            ambient: space.dim(),
            needed,
        });
    }
    if !space.gram_of(w).is_zero() {
        return Err(Error::NotIsotropic);
    }
    let mut xs = Matrix::zeros(0, space.dim(), ctx);
    for i in 0..k {
        let mut constraints = w.vstack(&xs);
        let mut rhs: Vec<S> = (0..k)
            .map(|j| if j == i { S::one(ctx) } else { S::zero(ctx) })
            .collect();
        rhs.extend((0..xs.rows()).map(|_| S::zero(ctx)));
        if let Some(a) = avoid {
            constraints = constraints.vstack(a.basis());
            rhs.extend((0..a.dim()).map(|_| S::zero(ctx)));
        }
        let x = solve_pairings(space, &constraints, &rhs)
            .ok_or_else(|| Error::PreconditionFailed("no dual vector satisfies the pairing constraints".into()))?;
        let c = half_norm(space, &x);
        let x = axpy(&x, &-c, w.row(i));
        xs = xs.vstack(&Matrix::row_vector(&x, ctx));
    }
    Ok(xs)
}

/// An isotropic `W'` with `dim W' = dim W` pairing perfectly with `W`.
pub fn isotropic_dual_complement<S: Scalar>(space: &FormSpace<S>, w: &Subspace<S>) -> Result<Subspace<S>> {
    if !space.is_isotropic(w) {
        return Err(Error::NotIsotropic);
    }
    Ok(Subspace::new(&dual_isotropic_basis(space, w.basis(), None)?))
}

/// Two isotropic lines `I₃, I₄` with `I, I₃, I₄` independent, in a space of
/// signature `(1, m)` with `m ≥ 2`.
pub fn third_isotropic_lines(
    space: &FormSpace<Rational>,
    i: &Subspace<Rational>,
    cfg: &SearchConfig,
) -> Result<(Subspace<Rational>, Subspace<Rational>)> {
    let sig = space.signature()?;
    if sig.plus != 1 || sig.minus < 2 || sig.null != 0 {
        return Err(Error::SignatureMismatch(format!(
            "expected signature (1, m) with m >= 2, got ({}, {})",
            sig.plus, sig.minus
        )));
    }
    if i.dim() != 1 || i.ambient_dim() != space.dim() {
        return Err(Error::DimensionMismatch("expected an isotropic line".into()));
    }
    let v = i.basis().row(0).to_vec();
    let w = hyperbolic_complete(space, &v)?;
    let plane = Subspace::new(&Matrix::from_rows(vec![v.clone(), w.clone()], space.dim(), ())?);
    let rest = space.orthogonal_complement(&plane);
    let u =
        search_in_span(rest.basis(), cfg, |u| space.norm(u).is_negative()).ok_or_else(|| Error::SearchExhausted {
            what: "negative vector orthogonal to a hyperbolic pair".into(),
            max_height: cfg.max_height,
        })?;
    let half_c = -space.norm(&u) / Rational::from(2);
    let base = axpy(&v, &half_c, &w);
    let one = Rational::one();
    let i3 = axpy(&base, &one, &u);
    let i4 = axpy(&base, &-one, &u);
    Ok((Subspace::line(&i3, ()), Subspace::line(&i4, ())))
}

fn check_j0_input<S: Scalar>(space: &FormSpace<S>, j1: &Subspace<S>, j2: &Subspace<S>) -> Result<()> {
    let fail = |m: &str| Err(Error::PreconditionFailed(m.into()));
    if j1.ambient_dim() != space.dim() || j2.ambient_dim() != space.dim() {
        return fail("subspaces live in another space");
    }
    if j1.dim() != j2.dim() {
        return fail("J1 and J2 differ in dimension");
    }
    if !space.is_isotropic(j1) || !space.is_isotropic(j2) {
        return fail("J1 and J2 must be isotropic");
    }
    if !space.pairing_matrix(j1, j2).is_zero() {
        return fail("J1 and J2 must be orthogonal");
    }
    if !j1.intersect(j2).is_zero() {
        return fail("J1 and J2 must intersect trivially");
    }
    Ok(())
}

/// An isotropic `J₀` pairing perfectly with both `J₁` and `J₂`.
pub fn j0_construct<S: Scalar>(space: &FormSpace<S>, j1: &Subspace<S>, j2: &Subspace<S>) -> Result<Subspace<S>> {
    j0_construct_avoiding(space, j1, j2, None)
}

/// As [`j0_construct`], with `J₀` also orthogonal to `avoid` (which must be
/// orthogonal to `J₁ ⊕ J₂`).
pub fn j0_construct_avoiding<S: Scalar>(
    space: &FormSpace<S>,
    j1: &Subspace<S>,
    j2: &Subspace<S>,
    avoid: Option<&Subspace<S>>,
) -> Result<Subspace<S>> {
    check_j0_input(space, j1, j2)?;
    let k = j1.dim();
    let w = j1.basis().vstack(j2.basis());
    let dual = dual_isotropic_basis(space, &w, avoid).map_err(|e| match e {
        Error::DimensionTooSmall { .. } | Error::PreconditionFailed(_) => {
            Error::PreconditionFailed(format!("no J0 exists here: {e}"))
        }
        other => other,
    })?;
    let sums = Matrix::from_fn(k, space.dim(), space.ctx(), |i, j| {
        dual.get(i, j).clone() + dual.get(k + i, j)
    });
    Ok(Subspace::new(&sums))
}

/// Splittings `I₁ = J₁ ⊕ K₁`, `I₂ = J₂ ⊕ K₂` where `Jᵢ` is the kernel of
/// the pairing inside `Iᵢ` and `Kᵢ` its pivot complement.
#[allow(clippy::type_complexity)]
pub fn split_off_kernels<S: Scalar>(
    space: &FormSpace<S>,
    i1: &Subspace<S>,
    i2: &Subspace<S>,
) -> Result<(Subspace<S>, Subspace<S>, Subspace<S>, Subspace<S>)> {
    if !i1.intersect(i2).is_zero() {
        return Err(Error::SubspacesIntersect);
    }
    let (j1, j2) = space.pairing_kernels(i1, i2);
    let k1 = i1.complement_in(&j1);
    let k2 = i2.complement_in(&j2);
    Ok((j1, k1, j2, k2))
}
