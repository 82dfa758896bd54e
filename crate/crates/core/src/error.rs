use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {message}")]
    Parse { pos: usize, message: String },

    #[error("variable z{index} out of range for a polynomial in {n} variables")]
    VariableOutOfRange { index: usize, n: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("monomial substitution produced the zero polynomial")]
    VanishingSubstitution,

    #[error("coordinate z{var} is zero but appears with a negative exponent")]
    ZeroCoordinate { var: usize },

    #[error("integer overflow during lattice reduction")]
    Overflow,

    #[error("lattice enumeration budget of {budget} nodes exceeded")]
    EnumerationBudget { budget: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{skipped} of {total} quadrature fibers are degenerate")]
    DegenerateFibers { skipped: u64, total: u64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    #[error("polynomial identity failed: {0}")]
    IdentityFailed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// Process exit code used by the command-line front end.
    ///
    /// Input problems map to 2, numerical failures to 3, violated
    /// preconditions to 4 and I/O failures to 5.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Parse { .. }
            | Error::VariableOutOfRange { .. }
            | Error::DimensionMismatch { .. }
            | Error::ZeroPolynomial
            | Error::Json(_) => 2,
            Error::VanishingSubstitution
            | Error::ZeroCoordinate { .. }
            | Error::Overflow
            | Error::EnumerationBudget { .. }
            | Error::DegenerateFibers { .. }
            | Error::RootFinding(_)
            | Error::IdentityFailed(_) => 3,
            Error::Precondition(_) => 4,
            Error::Io(_) => 5,
        }
    }
}
