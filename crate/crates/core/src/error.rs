use thiserror::Error;

/// Every failure the library can report.
///
/// Search exhaustion is kept distinct from input problems so that callers
/// (the CLI in particular) can map it to its own exit status.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("discriminant parameter {0} is not a positive squarefree integer")]
    InvalidDiscriminant(i64),
    #[error("mixed discriminants {0} and {1}")]
    MixedDiscriminant(u64, u64),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is not integral")]
    NotIntegral,
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid form: {0}")]
    InvalidForm(String),
    #[error("alternating forms have no signature")]
    AlternatingHasNoSignature,
    #[error("subspace is not isotropic")]
    NotIsotropic,
    #[error("subspace is not nested between I and its orthogonal")]
    NotNested,

    #[error("vector is not isotropic")]
    VectorNotIsotropic,
    #[error("vector lies in the radical of the form")]
    VectorInRadical,
    #[error("ambient dimension {ambient} too small for a dual of dimension {needed}")]
    DimensionTooSmall { ambient: usize, needed: usize },
    #[error("no {what} found up to height {max_height}")]
    SearchExhausted { what: String, max_height: u32 },
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("subspaces intersect nontrivially")]
    SubspacesIntersect,

    #[error("the case n = 2 with one-dimensional cusps is excluded")]
    ExcludedCase,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("signature ({p}, {q}) with p > q is unsupported")]
    SignatureUnsupported { p: usize, q: usize },

    #[error("matrix does not have determinant one")]
    NotDeterminantOne,
    #[error("order is not contained in the given overorder")]
    NotContained,
    #[error("lattices live in different ambient spaces")]
    AmbientMismatch,
    #[error("matrix does not preserve the form")]
    NotAnIsometry,
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDiscriminant(_) => "InvalidDiscriminant",
            Error::MixedDiscriminant(..) => "MixedDiscriminant",
            Error::Shape(_) => "Shape",
            Error::NotIntegral => "NotIntegral",
            Error::Parse(_) => "Parse",
            Error::InvalidForm(_) => "InvalidForm",
            Error::AlternatingHasNoSignature => "AlternatingHasNoSignature",
            Error::NotIsotropic => "NotIsotropic",
            Error::NotNested => "NotNested",
            Error::VectorNotIsotropic => "VectorNotIsotropic",
            Error::VectorInRadical => "VectorInRadical",
            Error::DimensionTooSmall { .. } => "DimensionTooSmall",
            Error::SearchExhausted { .. } => "SearchExhausted",
            Error::SignatureMismatch(_) => "SignatureMismatch",
            Error::PreconditionFailed(_) => "PreconditionFailed",
            Error::SubspacesIntersect => "SubspacesIntersect",
            Error::ExcludedCase => "ExcludedCase",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SignatureUnsupported { .. } => "SignatureUnsupported",
            Error::NotDeterminantOne => "NotDeterminantOne",
            Error::NotContained => "NotContained",
            Error::AmbientMismatch => "AmbientMismatch",
            Error::NotAnIsometry => "NotAnIsometry",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
