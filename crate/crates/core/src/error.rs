use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("qubit count {n} outside supported range 1..={max}")]
    QubitCount { n: usize, max: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown code {0:?}")]
    UnknownCode(String),

    #[error("unknown table policy {0:?}")]
    UnknownPolicy(String),

    #[error("code {code}: {reason}")]
    InvalidCode { code: String, reason: String },

    #[error("correction table: {0}")]
    Table(String),

    #[error("operator {0} is not in the normalizer (nonzero syndrome)")]
    NotInNormalizer(String),

    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    #[error("no sign change of f(p) - p found in (0.5, 1)")]
    Bracketing,

    #[error("channel is not twirl-consistent: component {index} = {value:e}")]
    TwirlInconsistent { index: usize, value: f64 },

    #[error("channel is not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),
}
