use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("problem size must be at least 1")]
    EmptyProblem,

    #[error("trade-off parameter alpha = {0} is outside [0, 1]")]
    InvalidAlpha(f64),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("qubit count {n} outside supported range 1..={max}")]
    QubitCount { n: usize, max: usize },

    #[error("invalid qubit index {index} for a {n}-qubit register")]
    QubitIndex { index: usize, n: usize },

    #[error("gate acts on qubit {0} more than once")]
    DuplicateQubit(usize),

    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),

    #[error("invalid mixer: {0}")]
    InvalidMixer(String),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("histogram is empty")]
    EmptyHistogram,

    #[error("objective is not finite at the starting point")]
    NonFiniteStart,

    #[error("invalid optimizer configuration: {0}")]
    OptimizerConfig(String),

    #[error("denominator {0:e} too close to zero")]
    NearZeroDenominator(f64),

    #[error("problem size {n} exceeds the limit of {max} for {what}")]
    TooLarge { n: usize, max: usize, what: &'static str },

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("invalid calibration data: {0}")]
    Calibration(String),

    #[error("circuit needs {needed} qubits but device {device} has {available}")]
    DeviceTooSmall {
        device: String,
        needed: usize,
        available: usize,
    },

    #[error("routing mismatch at amplitude {index}: fidelity {fidelity}")]
    RoutingMismatch { index: usize, fidelity: f64 },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("serialization: {0}")]
    Serde(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serde(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
