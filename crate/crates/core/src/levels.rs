//! Full lattices in a rational form space, the sandwich levels between two
//! of them and principal congruence membership.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::arith::{hnf, IntMatrix, Matrix, Rational};
use crate::error::{Error, Result};
use crate::forms::FormSpace;

/// A full-rank `ℤ`-lattice; the rows of `basis` are its basis vectors.
#[derive(Clone, Debug)]
pub struct FullLattice {
    ambient: FormSpace<Rational>,
    basis: Matrix<Rational>,
}

impl FullLattice {
    pub fn new(ambient: FormSpace<Rational>, basis: Matrix<Rational>) -> Result<Self> {
        if basis.rows() != ambient.dim() || basis.cols() != ambient.dim() {
            return Err(Error::Shape(format!(
                "lattice basis is {}x{}, ambient dimension {}",
                basis.rows(),
                basis.cols(),
                ambient.dim()
            )));
        }
        if !basis.is_nonsingular() {
            return Err(Error::PreconditionFailed("lattice basis is not of full rank".into()));
        }
        Ok(FullLattice { ambient, basis })
    }

    /// The coordinate lattice `ℤⁿ`.
    pub fn standard(ambient: FormSpace<Rational>) -> Self {
        let n = ambient.dim();
        FullLattice {
            ambient,
            basis: Matrix::identity(n, ()),
        }
    }

    pub fn ambient(&self) -> &FormSpace<Rational> {
        &self.ambient
    }

    pub fn basis(&self) -> &Matrix<Rational> {
        &self.basis
    }

    pub fn scale(&self, k: &Rational) -> Self {
        FullLattice {
            ambient: self.ambient.clone(),
            basis: self.basis.scale(k),
        }
    }

    /// Rows of `other` in the coordinates of this basis.
    fn coordinates_of(&self, other: &Matrix<Rational>) -> Matrix<Rational> {
        other.mul(&self.basis.inverse().expect("full rank"))
    }

    pub fn contains(&self, other: &FullLattice) -> bool {
        self.coordinates_of(&other.basis).is_integral()
    }

    /// Hermite normal form of the basis, scaled back from integers: equal
    /// lattices give equal matrices.
    pub fn canonical_basis(&self) -> Matrix<Rational> {
        let den = Rational::from(Rational::lcm_of_denominators(self.basis.entries()));
        let int = IntMatrix::from_rational(&self.basis.scale(&den)).expect("cleared denominators");
        hnf(&int).0.to_rational().scale(&den.recip().expect("positive"))
    }

    pub fn same_lattice(&self, other: &FullLattice) -> bool {
        self.canonical_basis() == other.canonical_basis()
    }

    /// Whether the Gram matrix of the basis is integral.
    pub fn is_integral(&self) -> bool {
        self.ambient.gram_of(&self.basis).is_integral()
    }

    pub fn to_json(&self) -> Value {
        json!({ "basis": self.basis.to_json() })
    }

    pub fn from_json(v: &Value, ambient: FormSpace<Rational>) -> Result<Self> {
        let basis = v
            .get("basis")
            .ok_or_else(|| Error::Parse("lattice needs a \"basis\" field".into()))?;
        let basis = Matrix::from_json(basis, Some(ambient.dim()), ())?;
        FullLattice::new(ambient, basis)
    }
}

/// The levels of the sandwich `N₁Λ′ ⊆ NΛ ⊆ Λ ⊆ N₂⁻¹Λ′`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ContainmentLevel {
    pub n1: BigInt,
    pub n2: BigInt,
    pub n_prime: BigInt,
}

impl ContainmentLevel {
    pub fn to_json(&self) -> Value {
        json!({
            "N1": int_json(&self.n1),
            "N2": int_json(&self.n2),
            "Nprime": int_json(&self.n_prime),
        })
    }
}

/// A JSON number when it fits in 64 bits, a decimal string otherwise.
pub(crate) fn int_json(n: &BigInt) -> Value {
    n.to_u64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

/// Least `N₁` with `N₁Λ′ ⊆ NΛ` and least `N₂` with `N₂Λ ⊆ Λ′`, and
/// `N′ = N₁N₂`.
///
/// Each is the least common denominator of a change-of-basis matrix, which
/// is the exponent of the corresponding finite quotient.
pub fn containment_level(lat: &FullLattice, lat_prime: &FullLattice, n: u64) -> Result<ContainmentLevel> {
    if lat.ambient.gram() != lat_prime.ambient.gram() || lat.ambient.kind() != lat_prime.ambient.kind() {
        return Err(Error::AmbientMismatch);
    }
    if n == 0 {
        return Err(Error::PreconditionFailed("the level N must be positive".into()));
    }
    let inv_n = Rational::new(1, n).expect("positive");
    let t1 = lat.coordinates_of(&lat_prime.basis).scale(&inv_n);
    let t2 = lat_prime.coordinates_of(&lat.basis);
    let n1 = Rational::lcm_of_denominators(t1.entries());
    let n2 = Rational::lcm_of_denominators(t2.entries());
    Ok(ContainmentLevel {
        n_prime: &n1 * &n2,
        n1,
        n2,
    })
}

/// Whether `γ` (acting on column coordinates) lies in the principal
/// congruence subgroup of level `N` of `Λ`: `γΛ = Λ` and `(γ − 1)Λ ⊆ NΛ`.
pub fn congruence_membership(gamma: &Matrix<Rational>, lat: &FullLattice, n: u64) -> Result<bool> {
    let dim = lat.ambient.dim();
    if gamma.rows() != dim || gamma.cols() != dim {
        return Err(Error::Shape(format!("expected a {dim}x{dim} matrix")));
    }
    let g = lat.ambient.gram();
    if &gamma.transpose().mul(g).mul(gamma) != g {
        return Err(Error::NotAnIsometry);
    }
    if n == 0 {
        return Err(Error::PreconditionFailed("the level N must be positive".into()));
    }
    // images of the basis rows bᵢ are bᵢ·γᵀ; express them in the basis
    let m = lat.coordinates_of(&lat.basis.mul(&gamma.transpose()));
    let Some(m_inv) = m.inverse() else {
        return Ok(false);
    };
    if !m.is_integral() || !m_inv.is_integral() {
        return Ok(false);
    }
    let inv_n = Rational::new(1, n).expect("positive");
    Ok(m.sub(&Matrix::identity(dim, ())).scale(&inv_n).is_integral())
}
