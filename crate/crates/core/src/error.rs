use alloc::string::String;

/// Errors reported by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("mass below spectral bound: m = {m} <= -lambda1 = {bound}")]
    MassBelowSpectralBound { m: f64, bound: f64 },
    #[error("zero field")]
    ZeroField,
    #[error("angular grid undersampled: {m_theta} angles for K = {k_max}")]
    Undersampled { m_theta: usize, k_max: usize },
    #[error("grid mismatch: {0}")]
    GridMismatch(String),
    #[error("no convergence after {iterations} iterations ({what})")]
    NoConvergence { iterations: usize, what: String },
    #[error("support escapes the admissible region: {0}")]
    SupportEscape(String),
    #[error("boundary data does not vanish (max |u| on boundary = {0:e})")]
    BoundaryNotVanishing(f64),
    #[error("exponent p = {p} outside the admissible range ({reason})")]
    ExponentOutOfRange { p: f64, reason: String },
    #[error("fit needs at least 3 rows, got {0}")]
    TooFewRows(usize),
    #[error("observable values must be strictly positive for a log-log fit")]
    SignViolation,
    #[error("no admissible epsilon for alpha = {0}")]
    NoAdmissibleEpsilon(f64),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
