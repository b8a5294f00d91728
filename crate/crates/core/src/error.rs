use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("observation {observation} is not compatible with a {expected} base measure")]
    IncompatibleObservation {
        observation: String,
        expected: &'static str,
    },

    #[error("hypotheses use different base measures ({p0} vs {p1})")]
    MismatchedBaseMeasure { p0: &'static str, p1: &'static str },

    #[error("p0 and p1 are the same distribution; every test has alpha + power = 1")]
    IdenticalHypotheses,

    #[error("expected {expected} observations, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("observation {0} has zero density under both hypotheses")]
    ImpossibleObservation(String),

    #[error("unsupported reduction: {0}")]
    UnsupportedReduction(String),

    #[error("error rates are not analytically evaluable for {0}; use the Monte Carlo estimator")]
    NotAnalyticallyEvaluable(String),

    #[error("grid [{lo}, {hi}] captures only {captured:.6} of the mass of {hypothesis} (need 0.99)")]
    GridRefused {
        lo: f64,
        hi: f64,
        hypothesis: &'static str,
        captured: f64,
    },

    #[error("{n} atoms exceed the enumeration limit of {max}")]
    EnumerationTooLarge { n: usize, max: usize },
}

impl Error {
    pub(crate) fn param(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }
}
