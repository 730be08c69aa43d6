use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below tolerance")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("invalid qubit label {0}: must be 1, 2 or 3")]
    InvalidQubit(usize),

    #[error("invalid qubit subset: {0}")]
    InvalidSubset(String),

    #[error("{field}: {reason}")]
    Validation { field: String, reason: String },

    #[error("Pauli index {0} out of range")]
    InvalidPauliIndex(usize),

    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },

    #[error("negative three-tangle {0:e} exceeds numerical tolerance")]
    NegativeTangle(f64),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("mapping recipe for B{index} failed verification: {detail}")]
    RecipeVerification { index: usize, detail: String },
}

impl Error {
    pub(crate) fn validation(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
