//! Spaces carrying a symmetric, alternating or Hermitian form.
//!
//! Vectors are row vectors in the coordinates of the space and
//! `(x, y) = x·G·ȳᵀ`, linear in the first argument and conjugate-linear in
//! the second (conjugation is trivial over ℚ). Subspaces are stored by their
//! canonical row basis.

use std::fmt;

use serde_json::{json, Value};

use crate::arith::{check_discriminant, Matrix, QuadFieldElement, Rational, Scalar, Subspace};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FormKind {
    Symmetric,
    Alternating,
    Hermitian,
}

impl FormKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FormKind::Symmetric => "symmetric",
            FormKind::Alternating => "alternating",
            FormKind::Hermitian => "hermitian",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(FormKind::Symmetric),
            "alternating" => Ok(FormKind::Alternating),
            "hermitian" => Ok(FormKind::Hermitian),
            other => Err(Error::Parse(format!("unknown form kind {other:?}"))),
        }
    }
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Counts of positive, negative and zero entries of a diagonalized form.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Signature {
    pub plus: usize,
    pub minus: usize,
    pub null: usize,
}

impl Signature {
    pub fn new(plus: usize, minus: usize, null: usize) -> Self {
        Signature { plus, minus, null }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FormSpace<S: Scalar> {
    kind: FormKind,
    gram: Matrix<S>,
}

impl<S: Scalar> FormSpace<S> {
    /// Validates the Gram matrix against `kind` and rejects degenerate forms.
    pub fn new(kind: FormKind, gram: Matrix<S>) -> Result<Self> {
        let space = FormSpace { kind, gram };
        space.validate()?;
        Ok(space)
    }

    /// Rechecks the invariants enforced by [`FormSpace::new`].
    pub fn validate(&self) -> Result<()> {
        self.validate_shape()?;
        if !self.gram.is_nonsingular() {
            return Err(Error::InvalidForm("Gram matrix is singular".into()));
        }
        Ok(())
    }

    fn validate_shape(&self) -> Result<()> {
        let (kind, gram) = (self.kind, &self.gram);
        if !gram.is_square() {
            return Err(Error::InvalidForm("Gram matrix is not square".into()));
        }
        let hermitian_field = S::INTEGRAL_RANK == 2;
        match kind {
            FormKind::Hermitian if !hermitian_field => {
                return Err(Error::InvalidForm(
                    "Hermitian forms need an imaginary quadratic field".into(),
                ))
            }
            FormKind::Symmetric | FormKind::Alternating if hermitian_field => {
                return Err(Error::InvalidForm(format!("{kind} forms are taken over ℚ")))
            }
            _ => {}
        }
        let n = gram.rows();
        for i in 0..n {
            for j in 0..n {
                let a = gram.get(i, j);
                let b = gram.get(j, i);
                let ok = match kind {
                    FormKind::Symmetric => a == b,
                    FormKind::Alternating => a.clone() + b == S::zero(gram.ctx()),
                    FormKind::Hermitian => *a == b.conj(),
                };
                if !ok {
                    return Err(Error::InvalidForm(format!("Gram matrix is not {kind} at ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn gram(&self) -> &Matrix<S> {
        &self.gram
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn ctx(&self) -> S::Ctx {
        self.gram.ctx()
    }

    pub fn zero_subspace(&self) -> Subspace<S> {
        Subspace::zero(self.dim(), self.ctx())
    }

    pub fn whole(&self) -> Subspace<S> {
        Subspace::whole(self.dim(), self.ctx())
    }

    /// `(x, y) = x·G·ȳᵀ`.
    pub fn pair(&self, x: &[S], y: &[S]) -> S {
        let xg = self.gram.vec_mul(x);
        xg.iter()
            .zip(y)
            .filter(|(a, b)| !a.is_zero() && !b.is_zero())
            .fold(S::zero(self.ctx()), |acc, (a, b)| acc + a.clone() * b.conj())
    }

    pub fn norm(&self, x: &[S]) -> S {
        self.pair(x, x)
    }

    /// `A·G·B̄ᵀ` for row matrices `A`, `B`.
    pub fn pairing_of(&self, a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
        a.mul(&self.gram).mul(&b.adjoint())
    }

    /// Gram matrix of the rows of `b`.
    pub fn gram_of(&self, b: &Matrix<S>) -> Matrix<S> {
        self.pairing_of(b, b)
    }

    /// The matrix `((aᵢ, bⱼ))` for the canonical bases of `a` and `b`.
    pub fn pairing_matrix(&self, a: &Subspace<S>, b: &Subspace<S>) -> Matrix<S> {
        self.pairing_of(a.basis(), b.basis())
    }

    pub fn is_isotropic(&self, s: &Subspace<S>) -> bool {
        self.gram_of(s.basis()).is_zero()
    }

    /// The form restricted to `s`, in the coordinates of its canonical basis.
    /// May be degenerate.
    pub fn restrict(&self, s: &Subspace<S>) -> FormSpace<S> {
        FormSpace {
            kind: self.kind,
            gram: self.gram_of(s.basis()),
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.is_nonsingular()
    }

    /// Counts of positive, negative and zero diagonal entries after exact
    /// congruent diagonalization `T·G·T*`.
    pub fn signature(&self) -> Result<Signature> {
        if self.kind == FormKind::Alternating {
            return Err(Error::AlternatingHasNoSignature);
        }
        let n = self.dim();
        let mut g = self.gram.clone();
        let mut sig = Signature::new(0, 0, 0);
        for k in 0..n {
            if g.get(k, k).is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !g.get(j, j).is_zero()) {
                    swap_congruent(&mut g, k, j);
                } else if let Some(j) = (k + 1..n).find(|&j| !g.get(k, j).is_zero()) {
                    // replace e_k by e_k + c·e_j with c = g_kj: norm 2|g_kj|² ≠ 0
                    let c = g.get(k, j).clone();
                    add_congruent(&mut g, k, j, &c);
                } else {
                    sig.null += 1;
                    continue;
                }
            }
            let pivot = g.get(k, k).clone();
            let inv = pivot.inv().expect("nonzero pivot");
            for i in k + 1..n {
                if g.get(i, k).is_zero() {
                    continue;
                }
                let f = -(g.get(i, k).clone() * &inv);
                add_congruent(&mut g, i, k, &f);
            }
            let d = pivot.to_rational().expect("diagonal of a Hermitian matrix is rational");
            if d.is_positive() {
                sig.plus += 1;
            } else {
                sig.minus += 1;
            }
        }
        Ok(sig)
    }

    /// `{v : (v, s) = 0 for all s ∈ S}`.
    pub fn orthogonal_complement(&self, s: &Subspace<S>) -> Subspace<S> {
        let a = self.gram.mul(&s.basis().adjoint());
        Subspace::new(&a.left_kernel())
    }

    /// The kernels of the pairing between `a` and `b`, inside `a` and `b`.
    pub fn pairing_kernels(&self, a: &Subspace<S>, b: &Subspace<S>) -> (Subspace<S>, Subspace<S>) {
        let p = self.pairing_matrix(a, b);
        let ker_a = p.left_kernel().mul(a.basis());
        // (a, β·B) = a·G·B̄ᵀ·β̄ᵀ, so β̄ runs over the right kernel of P
        let ker_b = p.right_kernel().conj().mul(b.basis());
        (Subspace::new(&ker_a), Subspace::new(&ker_b))
    }

    pub fn is_perfect_pairing(&self, a: &Subspace<S>, b: &Subspace<S>) -> bool {
        a.dim() == b.dim() && self.pairing_matrix(a, b).is_nonsingular()
    }

    /// The induced nondegenerate form on `I^⊥/I`.
    pub fn subquotient(&self, i: &Subspace<S>) -> Result<Subquotient<S>> {
        if i.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch("subspace lives in another space".into()));
        }
        if !self.is_isotropic(i) {
            return Err(Error::NotIsotropic);
        }
        let ctx = self.ctx();
        let perp = self.orthogonal_complement(i);
        // coset representatives: basis of I^⊥ reduced against the pivots of I
        let lift_space = perp.complement_in(i);
        let lift = lift_space.basis().clone();
        let q = lift.rows();

        let spanning = lift.vstack(i.basis());
        let (_, pivots) = spanning.rref();
        let extra: Vec<usize> = (0..self.dim()).filter(|c| !pivots.contains(c)).collect();
        let unit = Matrix::identity(self.dim(), ctx).select_rows(&extra);
        let full = spanning.vstack(&unit);
        let full_inv = full.inverse().expect("completed basis is invertible");
        let project = full_inv.select_columns(&(0..q).collect::<Vec<_>>());

        let qspace = FormSpace {
            kind: self.kind,
            gram: self.gram_of(&lift),
        };
        Ok(Subquotient {
            isotropic: i.clone(),
            perp,
            qspace,
            lift,
            project,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "kind": self.kind.as_str(),
            "gram": self.gram.to_json(),
        });
        if self.kind == FormKind::Hermitian {
            if let Some(d) = S::one(self.ctx()).to_json().get("D") {
                v["D"] = d.clone();
            }
        }
        v
    }

    pub fn from_json(v: &Value, ctx: S::Ctx) -> Result<Self> {
        let space = Self::from_json_unvalidated(v, ctx)?;
        space.validate()?;
        Ok(space)
    }

    /// Parses a square Gram matrix without checking symmetry or
    /// nondegeneracy, so a verifier can report those problems itself.
    pub(crate) fn from_json_unvalidated(v: &Value, ctx: S::Ctx) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("form space needs a \"kind\" string".into()))?;
        let kind = FormKind::parse(kind)?;
        let gram = v
            .get("gram")
            .ok_or_else(|| Error::Parse("form space needs a \"gram\" field".into()))?;
        let gram = Matrix::from_json(gram, None, ctx)?;
        if !gram.is_square() {
            return Err(Error::Parse("Gram matrix is not square".into()));
        }
        Ok(FormSpace { kind, gram })
    }
}

/// Elementary congruence swapping basis vectors `a` and `b`.
fn swap_congruent<S: Scalar>(g: &mut Matrix<S>, a: usize, b: usize) {
    let n = g.rows();
    let perm: Vec<usize> = (0..n)
        .map(|i| {
            if i == a {
                b
            } else if i == b {
                a
            } else {
                i
            }
        })
        .collect();
    *g = g.select_rows(&perm).select_columns(&perm);
}

/// Elementary congruence `e_dst ↦ e_dst + c·e_src`: row `dst += c·row src`,
/// column `dst += c̄·column src`.
fn add_congruent<S: Scalar>(g: &mut Matrix<S>, dst: usize, src: usize, c: &S) {
    let n = g.rows();
    for j in 0..n {
        let v = g.get(dst, j).clone() + c.clone() * g.get(src, j);
        g.set(dst, j, v);
    }
    let cc = c.conj();
    for i in 0..n {
        let v = g.get(i, dst).clone() + g.get(i, src).clone() * &cc;
        g.set(i, dst, v);
    }
}

/// The data of `I^⊥/I`: the quotient form plus maps between coordinates.
///
/// `lift` has one row per quotient basis vector (a coset representative in
/// `I^⊥`); `project` maps ambient row vectors of `I^⊥` to quotient
/// coordinates, so `lift·project = 1`.
#[derive(Clone, Debug)]
pub struct Subquotient<S: Scalar> {
    pub isotropic: Subspace<S>,
    pub perp: Subspace<S>,
    pub qspace: FormSpace<S>,
    pub lift: Matrix<S>,
    pub project: Matrix<S>,
}

impl<S: Scalar> Subquotient<S> {
    /// Image `S/I` of a subspace `I ⊆ S ⊆ I^⊥`.
    pub fn push_subspace(&self, s: &Subspace<S>) -> Result<Subspace<S>> {
        if s.ambient_dim() != self.perp.ambient_dim() || !s.contains(&self.isotropic) || !self.perp.contains(s) {
            return Err(Error::NotNested);
        }
        Ok(Subspace::new(&s.basis().mul(&self.project)))
    }

    /// Preimage of a quotient subspace: `span(lift(T)) + I`.
    pub fn pull_subspace(&self, t: &Subspace<S>) -> Subspace<S> {
        Subspace::new(&t.basis().mul(&self.lift)).sum(&self.isotropic)
    }
}

/// A form space over either ℚ or an imaginary quadratic field, as read from
/// JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnySpace {
    Rational(FormSpace<Rational>),
    Hermitian(FormSpace<QuadFieldElement>),
}

impl AnySpace {
    pub fn from_json(v: &Value) -> Result<Self> {
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("form space needs a \"kind\" string".into()))?;
        match FormKind::parse(kind)? {
            FormKind::Hermitian => {
                let d = v
                    .get("D")
                    .and_then(Value::as_i64)
                    .ok_or_else(|| Error::Parse("hermitian space needs an integer \"D\"".into()))?;
                let d = check_discriminant(d)?;
                Ok(AnySpace::Hermitian(FormSpace::from_json(v, d)?))
            }
            _ => Ok(AnySpace::Rational(FormSpace::from_json(v, ())?)),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            AnySpace::Rational(s) => s.to_json(),
            AnySpace::Hermitian(s) => {
                let mut v = s.to_json();
                v["D"] = json!(s.ctx());
                v
            }
        }
    }

    pub fn kind(&self) -> FormKind {
        match self {
            AnySpace::Rational(s) => s.kind(),
            AnySpace::Hermitian(s) => s.kind(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            AnySpace::Rational(s) => s.dim(),
            AnySpace::Hermitian(s) => s.dim(),
        }
    }
}

/// Block-diagonal Gram matrices for the standard spaces.
impl FormSpace<Rational> {
    pub fn symmetric(gram: Matrix<Rational>) -> Result<Self> {
        FormSpace::new(FormKind::Symmetric, gram)
    }

    pub fn alternating(gram: Matrix<Rational>) -> Result<Self> {
        FormSpace::new(FormKind::Alternating, gram)
    }

    /// `kU ⊥ ⟨d₁⟩ ⊥ … ⊥ ⟨dₘ⟩` in the basis `e₁, f₁, …, e_k, f_k, v₁, …, vₘ`.
    pub fn hyperbolic_sum(k: usize, diagonal: &[i64]) -> Result<Self> {
        let n = 2 * k + diagonal.len();
        let mut g = Matrix::zeros(n, n, ());
        for i in 0..k {
            g.set(2 * i, 2 * i + 1, Rational::one());
            g.set(2 * i + 1, 2 * i, Rational::one());
        }
        for (j, &d) in diagonal.iter().enumerate() {
            g.set(2 * k + j, 2 * k + j, Rational::from(d));
        }
        FormSpace::symmetric(g)
    }

    /// Standard symplectic space of dimension `2g`: block diagonal
    /// `[[0, 1], [−1, 0]]` in the basis `e₁, f₁, …, e_g, f_g`.
    pub fn standard_symplectic(g: usize) -> Self {
        let n = 2 * g;
        let mut m = Matrix::zeros(n, n, ());
        for i in 0..g {
            m.set(2 * i, 2 * i + 1, Rational::one());
            m.set(2 * i + 1, 2 * i, -Rational::one());
        }
        FormSpace::alternating(m).expect("standard symplectic form")
    }
}

impl FormSpace<QuadFieldElement> {
    pub fn hermitian(gram: Matrix<QuadFieldElement>) -> Result<Self> {
        FormSpace::new(FormKind::Hermitian, gram)
    }

    /// `k` hyperbolic planes `[[0, 1], [1, 0]]` followed by rational diagonal
    /// entries, over `ℚ(√−D)`.
    pub fn split_hermitian(d: u64, k: usize, diagonal: &[i64]) -> Result<Self> {
        check_discriminant(d as i64)?;
        let n = 2 * k + diagonal.len();
        let mut g = Matrix::zeros(n, n, d);
        for i in 0..k {
            g.set(2 * i, 2 * i + 1, QuadFieldElement::one(d));
            g.set(2 * i + 1, 2 * i, QuadFieldElement::one(d));
        }
        for (j, &x) in diagonal.iter().enumerate() {
            g.set(2 * k + j, 2 * k + j, QuadFieldElement::from_int(x, d));
        }
        FormSpace::hermitian(g)
    }
}
