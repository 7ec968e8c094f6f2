use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown action `{0}`")]
    UnknownAction(String),

    #[error("unknown fluent `{0}`")]
    UnknownFluent(String),

    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },

    #[error("action `{action}` both adds and deletes `{fluent}`")]
    ConflictingEffects { action: String, fluent: String },

    #[error("action `{0}` has a negative cost")]
    NegativeCost(String),

    #[error("action `{action}` is not applicable: missing precondition `{fluent}`")]
    PreconditionViolated { action: String, fluent: String },

    #[error("feature `{feature}`: {reason}")]
    InvalidFeature { feature: String, reason: String },

    #[error("problem is unsolvable")]
    Unsolvable,

    #[error("search budget of {0} expanded states exceeded")]
    BudgetExceeded(usize),

    #[error("candidate plan set is empty")]
    EmptySupport,

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid cost `{0}`")]
    InvalidCost(String),

    #[error("problem {index}: {source}")]
    InProblem {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for domain-level negative outcomes, as opposed to bad input.
    pub fn is_unsolvable(&self) -> bool {
        match self {
            Error::Unsolvable => true,
            Error::InProblem { source, .. } => source.is_unsolvable(),
            _ => false,
        }
    }

    pub(crate) fn in_problem(index: usize, source: Error) -> Self {
        Error::InProblem {
            index,
            source: Box::new(source),
        }
    }
}
