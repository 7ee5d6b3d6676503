use thiserror::Error;

/// Everything that can go wrong while certifying a bound or a solution set.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A comparison could not be decided at the working precision.
    #[error("inconclusive precision at {prec} bits: {what}")]
    Inconclusive { what: String, prec: u64 },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("no sign change: {0}")]
    NoSignChange(String),

    #[error("no crossing found: {0}")]
    NoCrossing(String),

    /// The reduced lattice was too short for the bound-reduction step.
    #[error("condition failed: {0}")]
    ConditionFailed(String),

    /// The scaled logs rounded to a singular lattice.
    #[error("degenerate lattice: {0}")]
    DegenerateLattice(String),

    #[error("{phase} failed at n = {n}: {source}")]
    Phase {
        phase: String,
        n: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn inconclusive(what: impl Into<String>, prec: u64) -> Self {
        Error::Inconclusive { what: what.into(), prec }
    }

    pub fn at(self, phase: &str, n: u64) -> Self {
        Error::Phase { phase: phase.to_string(), n, source: Box::new(self) }
    }

    /// True for errors that may go away at a higher working precision.
    pub fn wants_more_precision(&self) -> bool {
        match self {
            Error::Inconclusive { .. }
            | Error::PrecisionExhausted(_)
            | Error::NoSignChange(_)
            | Error::Singular(_) => true,
            Error::Phase { source, .. } => source.wants_more_precision(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
