//! Exact propagation of single-qubit noise through measurement-free
//! stabilizer error correction.

pub mod codes;
pub mod dense;
pub mod effective;
pub mod error;
pub mod flow;
pub mod gates;
pub mod pauli;
pub mod printed;
pub mod recovery;
pub mod scalar;

pub use codes::{get_code, get_code_by_name, validate_code, CodeName, ExactState, StabilizerCode, ValidationReport};
pub use effective::{effective_polys, eval_polys, ChannelPolys, ExactPoly, OutcomeTable, PauliChannelParams};
pub use error::{Error, Result};
pub use pauli::{enumerate_paulis, Pauli, PauliString};
pub use recovery::{build_table, logical_action, syndrome, CorrectionTable, Policy, Syndrome};
pub use scalar::{Real, Scalar};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

/// Double-precision channel parameters.
pub type PauliParams = PauliChannelParams<f64>;
/// Single-precision channel parameters.
pub type PauliParamsF32 = PauliChannelParams<f32>;
/// Exact rational channel parameters.
pub type ExactParams = PauliChannelParams<Rational>;
