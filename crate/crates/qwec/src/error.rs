use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QwecError {
    #[error("{what} is not unitary (defect {defect:e})")]
    NotUnitary { what: String, defect: f64 },
    #[error("operator is not Hermitian: {0}")]
    NotHermitian(String),
    #[error("support outside the data particles: {0}")]
    OutsideData(String),
    #[error("qubit on particle {0} is not housed by this layout or ordering")]
    Unhoused(usize),
    #[error("invalid layout or placement: {0}")]
    Layout(String),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
    #[error("outcome has probability {0:e}, below cutoff")]
    ZeroProbability(f64),
    #[error("non-Clifford gate cannot be conjugated symbolically: {0}")]
    NonClifford(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("program error: {0}")]
    Program(String),
    #[error("protocol precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, QwecError>;
