//! Crate-wide error type.

use thiserror::Error;

use crate::hyperplane::SearchTrace;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Two operands disagree on a named axis (`dim_a`, `dim_b`, ...).
    #[error("dimension mismatch on {axis}: expected {expected}, got {actual}")]
    DimensionMismatch {
        axis: &'static str,
        expected: usize,
        actual: usize,
    },

    /// Input fails state validation (trace, positivity, weights, ...).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Witness terms fail their structural invariants.
    #[error("invalid witness: {0}")]
    InvalidWitness(String),

    /// Local projection left (numerically) nothing of the state.
    #[error("truncation annihilates state: compressed trace {trace:.3e} <= tolerance {tol:.1e}")]
    TruncationAnnihilatesState { trace: f64, tol: f64 },

    #[error("operator is not Hermitian within tolerance: max deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("index {index} out of range for {len} mixture terms")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("eigensolver did not converge on a {dim}x{dim} matrix")]
    EigenFailed { dim: usize },

    /// The brute-force grid oracle only handles small real-symmetric inputs.
    #[error("grid oracle refuses input: {0}")]
    GridOracleUnsupported(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Cutting-plane search gave up; the trace records every round.
    #[error("hyperplane search failed after {} rounds: {reason}", trace.rounds.len())]
    SearchFailed { reason: String, trace: SearchTrace },
}
