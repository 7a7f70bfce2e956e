//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {got} out of supported range 1..={max}")]
    QubitCount { got: usize, max: usize },

    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitIndex { index: usize, num_qubits: usize },

    #[error("qubit-count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("observable is not Hermitian (residual imaginary weight {0:.3e})")]
    NonHermitian(f64),

    #[error("invalid CTMP model: {0}")]
    InvalidModel(String),

    #[error("stale gamma: model was modified after the noise-strength bound was computed")]
    StaleGamma,

    #[error(
        "incomplete calibration for qubit pair ({qubit_i}, {qubit_j}): \
         no prepared state with input pattern {pattern}"
    )]
    IncompleteCalibration {
        qubit_i: usize,
        qubit_j: usize,
        pattern: &'static str,
    },

    #[error("rate fit failed for qubit pair ({qubit_i}, {qubit_j}): {reason}")]
    FitFailure {
        qubit_i: usize,
        qubit_j: usize,
        reason: String,
    },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}
