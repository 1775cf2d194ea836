use thiserror::Error;

use crate::circuit::qasm::QasmError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Qasm(#[from] QasmError),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("invalid error-model parameters: {0}")]
    InvalidParams(String),

    #[error("velocity must be strictly positive and finite, got {0}")]
    InvalidVelocity(f64),

    #[error("invalid velocity bracket [{0}, {1}]")]
    InvalidBracket(f64, f64),

    #[error("unitary oracle supports at most 2 qubits, got {0}")]
    TooManyQubits(usize),

    #[error("gate {0} has no unitary")]
    NonUnitary(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("instance too large for exhaustive search: n = {n} (max {max})")]
    TooLarge { n: usize, max: usize },

    #[error("invalid placement: {0}")]
    InvalidPlacement(String),

    #[error("invalid benchmark: {0}")]
    InvalidBenchmark(String),

    #[error("mapping failed: {0}")]
    Mapping(String),

    #[error("schedule format: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
