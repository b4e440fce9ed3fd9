use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter failed validation. `name` is the user-facing parameter name.
    #[error("invalid value for `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// An index argument fell outside its admissible range.
    #[error("index {index} out of range {min}..={max}")]
    IndexOutOfRange {
        index: usize,
        min: usize,
        max: usize,
    },

    /// The tridiagonal QL iteration did not converge for eigenvalue `index`.
    #[error("eigensolver failed to converge for eigenvalue {index}")]
    NoConvergence { index: usize },

    /// A state expected to be normalized was not.
    #[error("state is not normalized (norm = {norm})")]
    NotNormalized { norm: f64 },

    /// Lanczos was handed a start vector with a non-zero imaginary part.
    #[error("Lanczos start vector must be real")]
    ComplexStartVector,

    /// Probabilities over a basis did not sum to one: the basis does not span the state.
    #[error(
        "projection onto {basis} basis has total weight {total}; the basis does not span the state"
    )]
    IncompleteBasis { basis: &'static str, total: f64 },

    /// A point of a parameter sweep failed.
    #[error("sweep point h_f = {hf} failed: {source}")]
    SweepPoint {
        hf: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerics, as opposed to rejected inputs.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::NoConvergence { .. } | Error::IncompleteBasis { .. } => true,
            Error::SweepPoint { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
