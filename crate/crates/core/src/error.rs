use alloc::string::String;

/// Errors reported by the engines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A dense operator would exceed the supported dimension.
    #[error("dimension {dim} exceeds the dense-operator limit {limit}")]
    DimensionGuard { dim: usize, limit: usize },
    /// The symmetric eigensolver did not converge.
    #[error("symmetric eigensolver did not converge for dimension {0}")]
    Eigensolve(usize),
    /// An operator expected to be real symmetric is not.
    #[error("operator is not real symmetric: deviation {0:e}")]
    NotRealSymmetric(f64),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
