use thiserror::Error;

/// Errors raised by state construction, channel application and parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// A matrix or vector failed one of the state invariants.
    #[error("invalid state: {invariant} violated (magnitude {magnitude:.3e})")]
    InvalidState {
        invariant: Invariant,
        magnitude: f64,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn dims(expected: impl ToString, found: impl ToString) -> Self {
        Error::DimensionMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// True for failures caused by the input data rather than by the program.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}

/// The named invariants a state, basis or POVM can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Invariant {
    Hermitian,
    UnitTrace,
    PositiveSemidefinite,
    UnitNorm,
    Orthonormal,
    Completeness,
    Unitary,
    Shape,
}

impl std::fmt::Display for Invariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            Invariant::Hermitian => "hermiticity",
            Invariant::UnitTrace => "unit trace",
            Invariant::PositiveSemidefinite => "positive semidefiniteness",
            Invariant::UnitNorm => "unit norm",
            Invariant::Orthonormal => "orthonormality",
            Invariant::Completeness => "completeness (elements sum to identity)",
            Invariant::Unitary => "unitarity",
            Invariant::Shape => "shape",
        };
        f.write_str(name)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
