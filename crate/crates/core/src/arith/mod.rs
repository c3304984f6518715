//! Exact arithmetic over ℚ and ℚ(√−D): scalars, dense matrices, canonical
//! subspaces and integer normal forms.

mod matrix;
mod normal_form;
mod quad;
mod rational;
mod scalar;
mod subspace;

pub use matrix::{dot, Matrix};
pub use normal_form::{hnf, invariant_factors, smith, IntMatrix};
pub use quad::{check_discriminant, is_squarefree, QuadFieldElement};
pub use rational::Rational;
pub use scalar::Scalar;
pub use subspace::{canonical_subspace, reduce_rows, Subspace};

/// `M·x = b` with free variables set to zero; `None` when inconsistent.
pub fn solve_exact<S: Scalar>(m: &Matrix<S>, b: &[S]) -> Option<Vec<S>> {
    m.solve(b)
}
