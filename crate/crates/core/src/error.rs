use thiserror::Error;

pub type Result<T, E = OmError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum OmError {
    #[error("duplicate ground-set element {0:?}")]
    DuplicateElement(String),
    #[error("ground-set mismatch ({left} vs {right} elements)")]
    GroundMismatch { left: usize, right: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("covector span exceeded the limit of {0} sign vectors")]
    SpanLimit(usize),
    #[error("invalid oriented matroid: {0}")]
    InvalidMatroid(String),
    #[error("not a subset of the ground set: {0}")]
    NotSubset(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("empty vector configuration")]
    EmptyConfig,
    #[error("lifting condition failed: {0}")]
    NotALifting(String),
    #[error("matroid is not uniform: {0}")]
    NotUniform(String),
    #[error("not a flip support: {0}")]
    NotASupport(String),
    #[error("unknown element {0}")]
    MissingElement(String),
    #[error("point is not in Q: {0}")]
    NotInQ(String),
    /// An exact zero appeared where genericity is required; resample the perturbation.
    #[error("degenerate perturbation: {0}")]
    Degenerate(String),
    /// A far vertex landed inside the model sphere; shrink the perturbation scale.
    #[error("scale separation violated: {0}")]
    ScaleSeparation(String),
    #[error("retry budget exhausted after {attempts} attempts: {last}")]
    RetriesExhausted { attempts: usize, last: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
