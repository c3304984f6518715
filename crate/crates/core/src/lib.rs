//! Exact construction and independent verification of rational-equivalence
//! certificates between cusp data (isotropic subspaces) of orthogonal,
//! symplectic and unitary modular varieties.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: exact scalars, matrices, canonical subspaces, Hermite and
//!   Smith normal forms.
//! * [`forms`]: spaces with symmetric, alternating or Hermitian forms,
//!   signatures, orthogonal complements and subquotients `I^⊥/I`.
//! * [`isotropic`]: bounded isotropic search, hyperbolic completion and the
//!   dual-complement constructions the chain builders rely on.
//! * [`chains`]: the certificate builders and the verifier.
//! * [`embeddings`]: explicit models (trace-zero matrices, Veronese and
//!   Segre maps, the Hermitian structure on `M₂(ℚ)`, orders).
//! * [`levels`]: lattice sandwiches and principal congruence membership.

pub mod arith;
pub mod chains;
pub mod embeddings;
pub mod error;
pub mod forms;
pub mod isotropic;
pub mod levels;

pub use error::{Error, Result};
