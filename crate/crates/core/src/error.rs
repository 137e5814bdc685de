use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("qubit count {n} outside supported range [{min}, {max}]")]
    QubitCount { n: usize, min: usize, max: usize },

    #[error("gate {index} is invalid for {n_qubits} qubits: {reason}")]
    InvalidGate { index: usize, n_qubits: usize, reason: &'static str },

    #[error("statevector needs {expected} amplitudes, got {actual}")]
    StateLength { expected: usize, actual: usize },

    #[error("quad value {0} does not fit in 4 bits")]
    QuadOutOfRange(u8),

    #[error("invalid hex digest: {0}")]
    InvalidHex(&'static str),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("{name} = {value} is not a probability")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("CNOT count {0} must be finite and non-negative")]
    InvalidCnotCount(f64),

    #[error("noise preset {preset} has no data for {n} qubits")]
    UnsupportedPreset { preset: &'static str, n: usize },

    #[error("difficulty {0} exceeds 64 hex characters")]
    InvalidDifficulty(u32),

    #[error("no nonce met the difficulty within {attempts} attempts")]
    AttemptCapExceeded { attempts: u64 },

    #[error("scan bound {0} exceeds the maximum of 200 qubits")]
    ScanBound(usize),
}
