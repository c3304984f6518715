//! Explicit models: trace-zero matrices with the trace form, the Veronese
//! and Segre points, `SL₂` acting on them, the Hermitian structure on
//! `M₂(ℚ)` and right orders of matrix lattices.
//!
//! Linear maps are matrices acting on column coordinate vectors, so an
//! isometry `M` of a space with Gram matrix `G` satisfies `Mᵀ·G·M̄ = G`.

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};

use crate::arith::{hnf, invariant_factors, smith, IntMatrix, Matrix, QuadFieldElement, Rational};
use crate::error::{Error, Result};
use crate::forms::FormSpace;

/// A rational `2×2` matrix of determinant one.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SL2Element {
    a: Rational,
    b: Rational,
    c: Rational,
    d: Rational,
}

impl SL2Element {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        if a.clone() * &d - b.clone() * &c != Rational::one() {
            return Err(Error::NotDeterminantOne);
        }
        Ok(SL2Element { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        SL2Element {
            a: Rational::one(),
            b: Rational::zero(),
            c: Rational::zero(),
            d: Rational::one(),
        }
    }

    pub fn entries(&self) -> [&Rational; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn to_matrix(&self) -> Matrix<Rational> {
        Matrix::from_rows(
            vec![
                vec![self.a.clone(), self.b.clone()],
                vec![self.c.clone(), self.d.clone()],
            ],
            2,
            (),
        )
        .expect("2x2")
    }

    pub fn mul(&self, o: &Self) -> Self {
        SL2Element {
            a: self.a.clone() * &o.a + self.b.clone() * &o.c,
            b: self.a.clone() * &o.b + self.b.clone() * &o.d,
            c: self.c.clone() * &o.a + self.d.clone() * &o.c,
            d: self.c.clone() * &o.b + self.d.clone() * &o.d,
        }
    }

    pub fn inverse(&self) -> Self {
        SL2Element {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    /// `τ ↦ (aτ + b)/(cτ + d)`; `None` at the pole.
    pub fn mobius(&self, tau: &Rational) -> Option<Rational> {
        let den = self.c.clone() * tau + &self.d;
        den.recip().map(|inv| (self.a.clone() * tau + &self.b) * &inv)
    }
}

fn rows2(a: i64, b: i64, c: i64, d: i64) -> Matrix<Rational> {
    Matrix::from_i64_rows(&[&[a, b], &[c, d]])
}

/// Labels of the basis used for trace-zero matrices.
pub const TRACE_ZERO_BASIS: [&str; 3] = ["E", "F", "H"];

/// Trace-zero `2×2` matrices with `(A, B) = tr(AB)` in the basis
/// `E = e₁₂, F = e₂₁, H = diag(1, −1)`.
pub fn trace_zero_space() -> (FormSpace<Rational>, [&'static str; 3]) {
    let basis = trace_zero_basis();
    let gram = Matrix::from_fn(3, 3, (), |i, j| trace(&basis[i].mul(&basis[j])));
    (
        FormSpace::symmetric(gram).expect("trace form is nondegenerate"),
        TRACE_ZERO_BASIS,
    )
}

fn trace_zero_basis() -> [Matrix<Rational>; 3] {
    [rows2(0, 1, 0, 0), rows2(0, 0, 1, 0), rows2(1, 0, 0, -1)]
}

fn trace(m: &Matrix<Rational>) -> Rational {
    m.get(0, 0).clone() + m.get(1, 1)
}

/// Coordinates of a trace-zero matrix `[[h, e], [f, −h]]` in `(E, F, H)`.
fn trace_zero_coords(m: &Matrix<Rational>) -> Vec<Rational> {
    vec![m.get(0, 1).clone(), m.get(1, 0).clone(), m.get(0, 0).clone()]
}

/// The matrix of `A ↦ γAγ⁻¹` on trace-zero matrices, basis `(E, F, H)`.
pub fn sl2_conjugation_image(g: &SL2Element) -> Matrix<Rational> {
    let gm = g.to_matrix();
    let gi = g.inverse().to_matrix();
    let cols: Vec<Vec<Rational>> = trace_zero_basis()
        .iter()
        .map(|x| trace_zero_coords(&gm.mul(x).mul(&gi)))
        .collect();
    Matrix::from_fn(3, 3, (), |i, j| cols[j][i].clone())
}

/// `e + τv₀ − τ²f` in the basis `(e, f, v₀)` of `U ⊥ ⟨2⟩`.
pub fn veronese_point(tau: &Rational) -> Vec<Rational> {
    vec![Rational::one(), -(tau.clone() * tau), tau.clone()]
}

/// `e₁ − τ₁τ₂f₁ + τ₁e₂ + τ₂f₂` in the basis `(e₁, f₁, e₂, f₂)` of `2U`.
pub fn segre_point(t1: &Rational, t2: &Rational) -> Vec<Rational> {
    vec![Rational::one(), -(t1.clone() * t2), t1.clone(), t2.clone()]
}

/// Acts on `2U` (basis `e₁, f₁, e₂, f₂`) by `g` on the ordered basis
/// `first` of an isotropic plane and by the contragredient `(g⁻¹)ᵀ` on the
/// dual basis `second`.
fn dual_pair_action(g: &SL2Element, first: [usize; 2], second: [usize; 2]) -> Matrix<Rational> {
    let mut m = Matrix::identity(4, ());
    let gm = g.to_matrix();
    let dual = g.inverse().to_matrix().transpose();
    for (basis, act) in [(first, &gm), (second, &dual)] {
        for (j, &bj) in basis.iter().enumerate() {
            for (i, &bi) in basis.iter().enumerate() {
                m.set(bi, bj, act.get(i, j).clone());
            }
        }
    }
    m
}

/// The image of `(γ₁, γ₃)` in `O⁺(2U)`: `γ₁` acts on the plane `(e₂, e₁)`
/// with its contragredient on `(f₂, f₁)`, `γ₃` on `(f₂, e₁)` with its
/// contragredient on `(e₂, f₁)`. Then
/// `image · segre(τ₁, τ₂) ∝ segre(γ₁τ₁, γ₃τ₂)`.
pub fn sl2_pair_orthogonal_image(g1: &SL2Element, g3: &SL2Element) -> Matrix<Rational> {
    const E1: usize = 0;
    const F1: usize = 1;
    const E2: usize = 2;
    const F2: usize = 3;
    let m1 = dual_pair_action(g1, [E2, E1], [F2, F1]);
    let m3 = dual_pair_action(g3, [F2, E1], [E2, F1]);
    m1.mul(&m3)
}

/// `M₂(ℚ)` as a two-dimensional space over `K = ℚ(√−D)`, `√−D` acting by
/// left multiplication with `J_D = [[0, −D], [1, 0]]`, with the form
/// `(A, B) = tr(AB*) + (√−D)⁻¹·tr(J_D·A·B*)` and `B*` the adjugate.
/// Coordinates are taken in the `K`-basis `(I, e₁₂)`.
#[derive(Clone, Debug)]
pub struct HermitianM2 {
    d: u64,
    space: FormSpace<QuadFieldElement>,
}

impl HermitianM2 {
    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn space(&self) -> &FormSpace<QuadFieldElement> {
        &self.space
    }

    pub fn j_d(&self) -> Matrix<Rational> {
        j_matrix(self.d)
    }

    /// The form evaluated directly on matrices.
    pub fn form(&self, a: &Matrix<Rational>, b: &Matrix<Rational>) -> QuadFieldElement {
        m2_form(self.d, a, b)
    }

    /// `K`-coordinates `(z₁, z₂)` with `A = z₁·I + z₂·e₁₂`.
    pub fn coordinates(&self, a: &Matrix<Rational>) -> Vec<QuadFieldElement> {
        // A = x₁I + y₁J_D + x₂e₁₂ + y₂e₂₂ since J_D·e₁₂ = e₂₂
        let d = Rational::from(self.d as i64);
        let x1 = a.get(0, 0).clone();
        let y1 = a.get(1, 0).clone();
        let x2 = a.get(0, 1).clone() + d * a.get(1, 0);
        let y2 = a.get(1, 1).clone() - a.get(0, 0);
        vec![
            QuadFieldElement::new(x1, y1, self.d).expect("valid D"),
            QuadFieldElement::new(x2, y2, self.d).expect("valid D"),
        ]
    }

    /// The matrix with `K`-coordinates `z`.
    pub fn matrix(&self, z: &[QuadFieldElement]) -> Matrix<Rational> {
        let j = self.j_d();
        let basis = [Matrix::identity(2, ()), rows2(0, 1, 0, 0)];
        let mut out = Matrix::zeros(2, 2, ());
        for (zi, bi) in z.iter().zip(&basis) {
            out = out.add(&bi.scale(zi.a())).add(&j.mul(bi).scale(zi.b()));
        }
        out
    }

    /// The `K`-linear matrix of `A ↦ Aγ` in the basis `(I, e₁₂)`.
    pub fn sl2_su11_image(&self, g: &SL2Element) -> Matrix<QuadFieldElement> {
        let gm = g.to_matrix();
        let cols: Vec<Vec<QuadFieldElement>> = [Matrix::identity(2, ()), rows2(0, 1, 0, 0)]
            .iter()
            .map(|b| self.coordinates(&b.mul(&gm)))
            .collect();
        Matrix::from_fn(2, 2, self.d, |i, j| cols[j][i].clone())
    }
}

fn adjugate(b: &Matrix<Rational>) -> Matrix<Rational> {
    Matrix::from_rows(
        vec![
            vec![b.get(1, 1).clone(), -b.get(0, 1).clone()],
            vec![-b.get(1, 0).clone(), b.get(0, 0).clone()],
        ],
        2,
        (),
    )
    .expect("2x2")
}

fn j_matrix(d: u64) -> Matrix<Rational> {
    rows2(0, -(d as i64), 1, 0)
}

fn m2_form(d: u64, a: &Matrix<Rational>, b: &Matrix<Rational>) -> QuadFieldElement {
    let ab = a.mul(&adjugate(b));
    let t0 = trace(&ab);
    let t1 = trace(&j_matrix(d).mul(&ab));
    // (√−D)⁻¹ = −√−D / D
    let inv_sqrt =
        QuadFieldElement::new(Rational::zero(), -Rational::one() / Rational::from(d as i64), d).expect("valid D");
    QuadFieldElement::from_rational(t0, d) + QuadFieldElement::from_rational(t1, d) * inv_sqrt
}

/// The Hermitian model of `M₂(ℚ)` over `ℚ(√−D)`.
pub fn hermitian_m2_space(d: u64) -> Result<HermitianM2> {
    crate::arith::check_discriminant(d as i64)?;
    let basis = [Matrix::identity(2, ()), rows2(0, 1, 0, 0)];
    let gram = Matrix::from_fn(2, 2, d, |i, j| m2_form(d, &basis[i], &basis[j]));
    Ok(HermitianM2 {
        d,
        space: FormSpace::hermitian(gram)?,
    })
}

/// `sl2_su11_image` for a freshly built model.
pub fn sl2_su11_image(d: u64, g: &SL2Element) -> Result<Matrix<QuadFieldElement>> {
    Ok(hermitian_m2_space(d)?.sl2_su11_image(g))
}

/// A full-rank `ℤ`-lattice in `M₂(ℚ)` given by four basis matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MatrixLattice {
    basis: Vec<Matrix<Rational>>,
}

fn flatten(m: &Matrix<Rational>) -> Vec<Rational> {
    m.to_rows().concat()
}

fn unflatten(v: &[Rational]) -> Matrix<Rational> {
    Matrix::from_rows(vec![v[..2].to_vec(), v[2..].to_vec()], 2, ()).expect("2x2")
}

impl MatrixLattice {
    pub fn new(basis: Vec<Matrix<Rational>>) -> Result<Self> {
        if basis.len() != 4 || basis.iter().any(|m| m.rows() != 2 || m.cols() != 2) {
            return Err(Error::Shape("a lattice in M2(Q) needs four 2x2 matrices".into()));
        }
        let lat = MatrixLattice { basis };
        if !lat.coordinate_matrix().is_nonsingular() {
            return Err(Error::PreconditionFailed("lattice basis is not of full rank".into()));
        }
        Ok(lat)
    }

    /// `M₂(ℤ)` with the basis `e₁₁, e₁₂, e₂₁, e₂₂`.
    pub fn standard() -> Self {
        MatrixLattice {
            basis: vec![
                rows2(1, 0, 0, 0),
                rows2(0, 1, 0, 0),
                rows2(0, 0, 1, 0),
                rows2(0, 0, 0, 1),
            ],
        }
    }

    pub fn basis(&self) -> &[Matrix<Rational>] {
        &self.basis
    }

    /// Rows are the flattened basis matrices `(m₁₁, m₁₂, m₂₁, m₂₂)`.
    pub fn coordinate_matrix(&self) -> Matrix<Rational> {
        Matrix::from_rows(self.basis.iter().map(flatten).collect(), 4, ()).expect("4x4")
    }

    fn from_coordinate_matrix(m: &Matrix<Rational>) -> Self {
        MatrixLattice {
            basis: m.to_rows().iter().map(|r| unflatten(r)).collect(),
        }
    }

    /// The same lattice with its basis in Hermite normal form.
    pub fn canonical(&self) -> Self {
        let m = self.coordinate_matrix();
        let den = Rational::from(Rational::lcm_of_denominators(m.entries()));
        let int = IntMatrix::from_rational(&m.scale(&den)).expect("cleared denominators");
        let (h, _) = hnf(&int);
        let inv = den.recip().expect("positive");
        Self::from_coordinate_matrix(&h.to_rational().scale(&inv))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        MatrixLattice {
            basis: self.basis.iter().map(|m| m.scale(k)).collect(),
        }
    }

    /// Coefficients of `x` in the basis, if `x` lies in the ℚ-span.
    pub fn coefficients(&self, x: &Matrix<Rational>) -> Option<Vec<Rational>> {
        self.coordinate_matrix().solve_left(&flatten(x))
    }

    pub fn contains(&self, x: &Matrix<Rational>) -> bool {
        self.coefficients(x).is_some_and(|c| c.iter().all(Rational::is_integer))
    }

    pub fn contains_lattice(&self, other: &Self) -> bool {
        other.basis.iter().all(|m| self.contains(m))
    }

    pub fn to_json(&self) -> Value {
        json!({ "basis": self.basis.iter().map(Matrix::to_json).collect::<Vec<_>>() })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let list = v
            .get("basis")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("matrix lattice needs a \"basis\" array of 2x2 matrices".into()))?;
        let basis = list
            .iter()
            .map(|m| Matrix::from_json(m, Some(2), ()))
            .collect::<Result<Vec<_>>>()?;
        MatrixLattice::new(basis)
    }
}

/// `𝒪 = {X ∈ M₂(ℚ) : ΛX ⊆ Λ}`, returned with a Hermite-normal-form basis.
pub fn order_of_lattice(lat: &MatrixLattice) -> MatrixLattice {
    let l_inv = lat.coordinate_matrix().inverse().expect("full rank");
    // x ↦ coefficients of λᵢ·X(x) in the lattice basis, for each i
    let unit = |k: usize| {
        let mut v = vec![Rational::zero(); 4];
        v[k] = Rational::one();
        unflatten(&v)
    };
    let mut cond: Matrix<Rational> = Matrix::zeros(4, 0, ());
    for lam in lat.basis() {
        let r = Matrix::from_rows((0..4).map(|k| flatten(&lam.mul(&unit(k)))).collect(), 4, ()).expect("4x4");
        let block = r.mul(&l_inv);
        cond = Matrix::from_fn(4, cond.cols() + 4, (), |i, j| {
            if j < cond.cols() {
                cond.get(i, j).clone()
            } else {
                block.get(i, j - cond.cols()).clone()
            }
        });
    }
    // x·C ∈ ℤ¹⁶ with C = C'/den; Smith S = U·C'·V gives x = y·U with yᵢ ∈ (den/sᵢ)ℤ
    let den = Rational::from(Rational::lcm_of_denominators(cond.entries()));
    let c_int = IntMatrix::from_rational(&cond.scale(&den)).expect("cleared denominators");
    let (s, u, _) = smith(&c_int);
    let u = u.to_rational();
    let rows: Vec<Vec<Rational>> = (0..4)
        .map(|i| {
            let si = Rational::from(s.get(i, i).clone());
            let f = den.clone() / si;
            u.row(i).iter().map(|x| f.clone() * x).collect()
        })
        .collect();
    let basis = Matrix::from_rows(rows, 4, ()).expect("4x4");
    MatrixLattice::from_coordinate_matrix(&basis).canonical()
}

/// Least `N₀ ≥ 1` with `N₀·𝒪_max ⊆ 𝒪`, the exponent of `𝒪_max/𝒪`.
pub fn order_containment_scale(o: &MatrixLattice, omax: &MatrixLattice) -> Result<BigInt> {
    let t = o
        .coordinate_matrix()
        .mul(&omax.coordinate_matrix().inverse().expect("full rank"));
    let t = IntMatrix::from_rational(&t).map_err(|_| Error::NotContained)?;
    Ok(invariant_factors(&t).into_iter().max().unwrap_or_else(BigInt::one))
}
