//! Rational-equivalence certificates: chains of isotropic subspaces whose
//! consecutive members are joined by typed, checkable links.
//!
//! [`build`] produces certificates following the case analysis for each
//! kind of ambient space; [`verify`] rechecks every link condition from
//! scratch and shares no case analysis with the builders.

pub mod build;
pub mod certificate;
pub mod verify;

pub use build::{build_chain_orthogonal, build_chain_symplectic, build_chain_unitary};
pub use certificate::{AnyCertificate, ChainCertificate, ChainKind, Link, ManinDrinfeldLeaf, FORMAT_VERSION};
pub use verify::{verify_certificate, Failure, VerificationReport};
