use thiserror::Error;

/// Errors raised by the algebra kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in [2, 65536]")]
    NotPrime(u64),

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("exponent overflow while raising to the power {0}")]
    DegreeOverflow(u64),

    #[error("step budget of {limit} exceeded")]
    BudgetExceeded { limit: u64 },

    #[error("map is not well defined: relation #{relation} does not map to zero")]
    NotWellDefined { relation: usize },

    #[error("object is not finite dimensional over the prime field")]
    NotArtinian,

    #[error("base maps are incompatible: {0}")]
    IncompatibleBase(String),

    #[error("invalid deformation: {0}")]
    InvalidDeformation(String),

    #[error("Buchberger criterion violated by an emitted basis (engine bug)")]
    CriterionViolated,

    #[error("Kunz violation on `{map}`: omega_zero = {omega_zero}, frob_surjective = {frob_surjective}")]
    KunzViolation {
        map: String,
        omega_zero: bool,
        frob_surjective: bool,
    },
}

impl Error {
    pub fn mismatch(msg: impl Into<String>) -> Self {
        Error::AmbientMismatch(msg.into())
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
