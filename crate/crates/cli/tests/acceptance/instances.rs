//! Random pairs of isotropic subspaces: standard coordinate subspaces moved
//! by random products of integral transvections.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cuspcert::arith::{Matrix, QuadFieldElement, Rational, Scalar, Subspace};
use cuspcert::forms::FormSpace;

pub struct Instance<S: Scalar> {
    pub space: FormSpace<S>,
    pub i1: Subspace<S>,
    pub i2: Subspace<S>,
}

/// `x ↦ x + a·(x, v)·v` on row vectors, as the matrix `I + a·(G v̄ᵀ)·v`.
fn transvection<S: Scalar>(space: &FormSpace<S>, v: &[S], a: &S) -> Matrix<S> {
    let ctx = space.ctx();
    let n = space.dim();
    let vbar: Vec<S> = v.iter().map(Scalar::conj).collect();
    let gv = space.gram().mul_vec(&vbar);
    Matrix::from_fn(n, n, ctx, |i, j| {
        let delta = if i == j { S::one(ctx) } else { S::zero(ctx) };
        delta + a.clone() * &gv[i] * &v[j]
    })
}

fn moved<S: Scalar>(s: &Subspace<S>, m: &Matrix<S>) -> Subspace<S> {
    Subspace::new(&s.basis().mul(m))
}

fn unit<S: Scalar>(n: usize, k: usize, ctx: S::Ctx) -> Vec<S> {
    (0..n)
        .map(|i| if i == k { S::one(ctx) } else { S::zero(ctx) })
        .collect()
}

/// Span of one of `e_i`, `f_i` for each chosen hyperbolic index `i`.
fn standard_isotropic<S: Scalar>(rng: &mut ChaCha8Rng, planes: usize, k: usize, n: usize, ctx: S::Ctx) -> Subspace<S> {
    let mut idx: Vec<usize> = (0..planes).collect();
    idx.shuffle(rng);
    let rows: Vec<Vec<S>> = idx[..k]
        .iter()
        .map(|&i| unit(n, 2 * i + usize::from(rng.gen_bool(0.5)), ctx))
        .collect();
    Subspace::from_rows(rows, n, ctx).expect("well-formed rows")
}

fn small_int(rng: &mut ChaCha8Rng) -> i64 {
    rng.gen_range(-1..=1)
}

fn symplectic_group_element(rng: &mut ChaCha8Rng, space: &FormSpace<Rational>) -> Matrix<Rational> {
    let n = space.dim();
    let mut m = Matrix::identity(n, ());
    for _ in 0..rng.gen_range(0..=3) {
        let v: Vec<Rational> = loop {
            let v: Vec<i64> = (0..n).map(|_| small_int(rng)).collect();
            if v.iter().any(|&x| x != 0) {
                break v.into_iter().map(Rational::from).collect();
            }
        };
        let a = Rational::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        m = m.mul(&transvection(space, &v, &a));
    }
    m
}

pub fn symplectic(rng: &mut ChaCha8Rng) -> Instance<Rational> {
    let g = rng.gen_range(1..=4);
    let space = FormSpace::standard_symplectic(g);
    let k = rng.gen_range(1..=g);
    let (a, b) = (
        standard_isotropic(rng, g, k, 2 * g, ()),
        standard_isotropic(rng, g, k, 2 * g, ()),
    );
    let common = symplectic_group_element(rng, &space);
    let extra = if rng.gen_bool(0.5) {
        symplectic_group_element(rng, &space)
    } else {
        Matrix::identity(2 * g, ())
    };
    Instance {
        i1: moved(&a, &common),
        i2: moved(&moved(&b, &extra), &common),
        space,
    }
}

/// Isotropic vectors of the hyperbolic part: `e_i`, `f_i`, `e_i + e_j` and
/// `e_i + t√−D·f_i`.
fn unitary_isotropic_vector(rng: &mut ChaCha8Rng, planes: usize, n: usize, d: u64) -> Vec<QuadFieldElement> {
    let q = |x: i64, y: i64| QuadFieldElement::from_integers(&[x, y], d);
    let mut v = vec![q(0, 0); n];
    let i = rng.gen_range(0..planes);
    match rng.gen_range(0..3) {
        0 => v[2 * i + usize::from(rng.gen_bool(0.5))] = q(1, 0),
        1 => {
            let j = rng.gen_range(0..planes);
            let side = usize::from(rng.gen_bool(0.5));
            v[2 * i + side] = q(1, 0);
            if j != i {
                v[2 * j + side] = q(small_int(rng), small_int(rng));
            }
        }
        _ => {
            v[2 * i] = q(1, 0);
            v[2 * i + 1] = q(0, if rng.gen_bool(0.5) { 1 } else { -1 });
        }
    }
    v
}

fn unitary_group_element(
    rng: &mut ChaCha8Rng,
    space: &FormSpace<QuadFieldElement>,
    planes: usize,
    d: u64,
) -> Matrix<QuadFieldElement> {
    let n = space.dim();
    let mut m = Matrix::identity(n, d);
    for _ in 0..rng.gen_range(0..=3) {
        let v = unitary_isotropic_vector(rng, planes, n, d);
        // purely imaginary scalar keeps the transvection unitary
        let a = QuadFieldElement::from_integers(&[0, if rng.gen_bool(0.5) { 1 } else { -1 }], d);
        m = m.mul(&transvection(space, &v, &a));
    }
    m
}

pub fn unitary(rng: &mut ChaCha8Rng) -> Instance<QuadFieldElement> {
    let d = *[1u64, 2, 3, 7].choose(rng).unwrap();
    let shapes: [(usize, &[i64]); 5] = [(1, &[]), (1, &[-1]), (1, &[-1, -2]), (1, &[1, -3]), (2, &[])];
    let (planes, diag) = *shapes.choose(rng).unwrap();
    let space = FormSpace::split_hermitian(d, planes, diag).expect("valid Hermitian space");
    let n = space.dim();
    let k = rng.gen_range(1..=planes);
    let (a, b) = (
        standard_isotropic(rng, planes, k, n, d),
        standard_isotropic(rng, planes, k, n, d),
    );
    let common = unitary_group_element(rng, &space, planes, d);
    let extra = if rng.gen_bool(0.5) {
        unitary_group_element(rng, &space, planes, d)
    } else {
        Matrix::identity(n, d)
    };
    Instance {
        i1: moved(&a, &common),
        i2: moved(&moved(&b, &extra), &common),
        space,
    }
}

/// Eichler transformation `x ↦ x + (x, e)u − (x, u)e − ½(u, u)(x, e)e` for
/// isotropic `e` and `u ⊥ e`.
fn eichler(space: &FormSpace<Rational>, e: &[Rational], u: &[Rational]) -> Matrix<Rational> {
    let n = space.dim();
    let ge = space.gram().mul_vec(e);
    let gu = space.gram().mul_vec(u);
    let half_uu = space.norm(u) / Rational::from(2);
    Matrix::from_fn(n, n, (), |i, j| {
        let delta = if i == j { Rational::one() } else { Rational::zero() };
        delta + ge[i].clone() * &u[j] - gu[i].clone() * &e[j] - half_uu.clone() * &ge[i] * &e[j]
    })
}

fn orthogonal_group_element(rng: &mut ChaCha8Rng, space: &FormSpace<Rational>) -> Matrix<Rational> {
    let n = space.dim();
    let mut m = Matrix::identity(n, ());
    for _ in 0..rng.gen_range(0..=2) {
        let k = rng.gen_range(0..4);
        let partner = k ^ 1;
        let e = unit::<Rational>(n, k, ());
        let u: Vec<Rational> = (0..n)
            .map(|i| {
                if i == partner || i == k {
                    Rational::zero()
                } else {
                    Rational::from(small_int(rng))
                }
            })
            .collect();
        m = m.mul(&eichler(space, &e, &u));
    }
    m
}

#[derive(Clone, Copy)]
pub enum OrthShape {
    Lines,
    TransversalPlanes,
    IntersectingPlanes,
}

/// `2U ⊥ ⟨−a₁⟩ ⊥ …` with `n ≤ 5`; planes need `n ≥ 3`.
pub fn orthogonal(rng: &mut ChaCha8Rng, shape: OrthShape) -> Instance<Rational> {
    let m = match shape {
        OrthShape::Lines => rng.gen_range(0..=3),
        _ => rng.gen_range(1..=3),
    };
    let diag: Vec<i64> = (0..m).map(|_| -*[1i64, 2, 3, 5].choose(rng).unwrap()).collect();
    let space = FormSpace::hyperbolic_sum(2, &diag).expect("valid quadratic space");
    let n = space.dim();
    let line = |k: usize| Subspace::line(&unit::<Rational>(n, k, ()), ());
    // e1, f1, e2, f2 = 0, 1, 2, 3; isotropic planes are span(x, y) with x ∈ {e1, f1}, y ∈ {e2, f2}
    let plane = |x: usize, y: usize| line(x).sum(&line(y));
    let (a, b) = match shape {
        OrthShape::Lines => (line(rng.gen_range(0..4)), line(rng.gen_range(0..4))),
        OrthShape::TransversalPlanes => {
            let (x, y) = (rng.gen_range(0..2), 2 + rng.gen_range(0..2));
            (plane(x, y), plane(x ^ 1, y ^ 1))
        }
        OrthShape::IntersectingPlanes => {
            let (x, y) = (rng.gen_range(0..2), 2 + rng.gen_range(0..2));
            if rng.gen_bool(0.5) {
                (plane(x, y), plane(x, y ^ 1))
            } else {
                (plane(x, y), plane(x ^ 1, y))
            }
        }
    };
    let common = orthogonal_group_element(rng, &space);
    let extra = match shape {
        // an independent move could change the relative position of the planes
        OrthShape::Lines if rng.gen_bool(0.5) => orthogonal_group_element(rng, &space),
        _ => Matrix::identity(n, ()),
    };
    Instance {
        i1: moved(&a, &common),
        i2: moved(&moved(&b, &extra), &common),
        space,
    }
}
