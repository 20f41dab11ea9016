use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// Float-mode division where the divisor interval contains zero.
    #[error("division by a value not distinguishable from zero (radius {radius:e})")]
    DivisionByUncertainZero { radius: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("matrix is not positive semidefinite: {0}")]
    NotPsd(String),

    #[error("matrix is not doubly stochastic: {0}")]
    NotDoublyStochastic(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid scalar literal `{text}`: {msg}")]
    ScalarLiteral { text: String, msg: String },

    #[error("invalid character table: {0}")]
    InvalidCharacter(String),

    #[error("conductor {0} does not divide {1}; no exact lift")]
    ConductorLift(u32, u32),

    #[error("value not representable over {target}: {detail}")]
    NotRepresentable { target: &'static str, detail: String },

    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCap(usize),

    #[error("iteration did not converge: {0}")]
    NonConvergence(String),

    #[error("expected-value mismatch for {quantity}: expected {expected}, observed {observed}")]
    Mismatch {
        quantity: String,
        expected: String,
        observed: String,
    },

    #[error("unknown checker `{0}`")]
    UnknownChecker(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("state file: {0}")]
    State(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
