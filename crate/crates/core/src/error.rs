use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("expected a rational of the form \"p/q\", got {0:?}")]
pub struct ParseRationalError(pub String);

/// Failures of the configuration analysis and the robot protocol.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("configuration contains a multiplicity point")]
    MultiplicityPresent,
    #[error("snapshot contains a multiplicity point")]
    MultiplicityInSnapshot,
    #[error("angle sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("configuration is rotationally symmetric")]
    SymmetricConfiguration,
    #[error("both hypothesis configurations are rotationally symmetric")]
    AmbiguousSymmetric,
    #[error("observer is not a confused leader")]
    NotConfusedLeader,
    #[error("unknown robot {0:?}")]
    UnknownRobot(String),
    #[error("duplicate robot id {0:?}")]
    DuplicateRobot(String),
    #[error("configuration has no robots")]
    EmptyConfiguration,
    #[error("snapshot violates its contract: {0}")]
    ContractViolation(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

/// Errors raised while reading the JSON input formats.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
