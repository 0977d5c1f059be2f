use thiserror::Error;

/// Errors raised by matrix, state, gate, channel and session operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix has a negative eigenvalue {value:e}")]
    NegativeEigenvalue { value: f64 },
    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("qubit index {index} out of range 1..={size}")]
    QubitOutOfRange { index: usize, size: usize },
    #[error("registers overlap on qubit {0}")]
    OverlappingRegisters(usize),
    #[error("register has duplicate qubit {0}")]
    DuplicateQubit(usize),
    #[error("unknown register id {0}")]
    UnknownRegister(usize),
    #[error("operators do not form a valid quantum channel (max deviation {deviation:e})")]
    InvalidChannel { deviation: f64 },
    #[error("unknown channel name `{0}`")]
    UnknownChannel(String),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("operation requires at least one allocated qubit")]
    EmptySession,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
