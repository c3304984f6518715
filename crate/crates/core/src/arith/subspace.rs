use serde_json::Value;

use super::matrix::Matrix;
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// A linear subspace of `Sⁿ` in canonical form: the rows of `basis` are the
/// nonzero rows of the reduced row echelon form of any spanning set, so two
/// subspaces are equal exactly when their spans coincide.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace<S: Scalar> {
    basis: Matrix<S>,
}

/// Canonical representative of the row span of `basis`.
pub fn canonical_subspace<S: Scalar>(basis: &Matrix<S>) -> Subspace<S> {
    let (r, pivots) = basis.rref();
    let keep: Vec<usize> = (0..pivots.len()).collect();
    Subspace {
        basis: r.select_rows(&keep),
    }
}

impl<S: Scalar> Subspace<S> {
    pub fn new(basis: &Matrix<S>) -> Self {
        canonical_subspace(basis)
    }

    pub fn from_rows(rows: Vec<Vec<S>>, ambient_dim: usize, ctx: S::Ctx) -> Result<Self> {
        Ok(canonical_subspace(&Matrix::from_rows(rows, ambient_dim, ctx)?))
    }

    pub fn zero(ambient_dim: usize, ctx: S::Ctx) -> Self {
        Subspace {
            basis: Matrix::zeros(0, ambient_dim, ctx),
        }
    }

    pub fn whole(ambient_dim: usize, ctx: S::Ctx) -> Self {
        Subspace {
            basis: Matrix::identity(ambient_dim, ctx),
        }
    }

    /// Span of a single vector.
    pub fn line(v: &[S], ctx: S::Ctx) -> Self {
        canonical_subspace(&Matrix::row_vector(v, ctx))
    }

    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ctx(&self) -> S::Ctx {
        self.basis.ctx()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Coefficients of `v` in the canonical basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[S]) -> Option<Vec<S>> {
        if v.len() != self.ambient_dim() {
            return None;
        }
        self.basis.solve_left(v)
    }

    pub fn contains_vector(&self, v: &[S]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains(&self, other: &Self) -> bool {
        other.ambient_dim() == self.ambient_dim() && (0..other.dim()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    /// `self + other`.
    pub fn sum(&self, other: &Self) -> Self {
        canonical_subspace(&self.basis.vstack(&other.basis))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let stacked = self.basis.vstack(&other.basis);
        // a·A + b·B = 0  ⇒  a·A lies in both spans
        let relations = stacked.left_kernel();
        let k = self.dim();
        let coeffs = relations.select_columns(&(0..k).collect::<Vec<_>>());
        canonical_subspace(&coeffs.mul(&self.basis))
    }

    /// Rows of `self` reduced against the pivots of `modulo`, then
    /// canonicalized: a deterministic complement of `modulo ∩ self` in
    /// `self` when `modulo ⊆ self`.
    pub fn complement_in(&self, modulo: &Self) -> Self {
        let reduced = reduce_rows(&self.basis, modulo);
        canonical_subspace(&reduced)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({ "basis": self.basis.to_json() })
    }

    pub fn from_json(v: &Value, ambient_dim: usize, ctx: S::Ctx) -> Result<Self> {
        let basis = v
            .get("basis")
            .ok_or_else(|| Error::Parse("subspace needs a \"basis\" field".into()))?;
        let m = Matrix::from_json(basis, Some(ambient_dim), ctx)?;
        Ok(canonical_subspace(&m))
    }
}

/// Clears, in every row of `rows`, the pivot columns of the canonical basis
/// of `modulo` by subtracting multiples of its basis vectors.
pub fn reduce_rows<S: Scalar>(rows: &Matrix<S>, modulo: &Subspace<S>) -> Matrix<S> {
    let (_, pivots) = modulo.basis.rref();
    let mut out = rows.clone();
    for i in 0..out.rows() {
        for (k, &p) in pivots.iter().enumerate() {
            let f = out.get(i, p).clone();
            if f.is_zero() {
                continue;
            }
            for j in 0..out.cols() {
                let v = out.get(i, j).clone() - f.clone() * modulo.basis.get(k, j);
                out.set(i, j, v);
            }
        }
    }
    out
}
