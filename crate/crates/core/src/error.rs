use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("basepoint outside set")]
    BasepointOutside,
    #[error("point outside set")]
    PointOutside,
    #[error("empty polyhedron")]
    EmptyPolyhedron,
    #[error("instance above desk scale: {0}")]
    AboveDeskScale(String),
    #[error("invalid rational {0:?}")]
    ParseRational(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate does not verify: {0}")]
    CertificateRejected(String),
    #[error("cells do not share a common parent: {0}")]
    MixedParents(String),
    #[error("ratio analysis unsupported for this pair: {0}")]
    UnsupportedPair(String),
    #[error("no tail bound available: {0}")]
    NoTailBound(String),
    #[error("unknown law {0:?}")]
    UnknownLaw(String),
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    pub(crate) fn dim(expected: usize, got: usize) -> Self {
        Error::DimensionMismatch { expected, got }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
