use thiserror::Error;

#[derive(Debug, Error)]
pub enum MilpError {
    #[error("invalid name {0:?}")]
    InvalidName(String),
    #[error("duplicate name {0:?}")]
    DuplicateName(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("invalid bounds for {name}: [{lower}, {upper}]")]
    InvalidBounds { name: String, lower: f64, upper: f64 },
    #[error("non-finite coefficient {value} in {row}")]
    InvalidCoefficient { row: String, value: f64 },
    #[error("LP parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("model too large for brute force: {0}")]
    TooLarge(String),
    #[error("assignment has {got} values, model has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
}
