use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("tolerance must be strictly positive")]
    NonPositiveTolerance,

    #[error("position {pos} is outside a word of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },

    #[error("periodic sequence has an empty period")]
    EmptyPeriod,

    #[error("sequence has a preperiod; a purely periodic sequence is required")]
    NotPurelyPeriodic,

    #[error("cannot compare quadratic irrationals from different fields Q(sqrt {0}) and Q(sqrt {1})")]
    FieldMismatch(String, String),

    #[error("square-free kernel of {0} is beyond the factorization limit")]
    FactorizationLimit(String),

    #[error("{what}: needs {needed}, budget is {budget}")]
    Budget {
        what: String,
        needed: u128,
        budget: u128,
    },

    /// Covering enumeration ran out of budget; `partial[r]` holds the counts
    /// for every scale that completed.
    #[error("covering count budget {budget} exhausted at scale {scale}")]
    CountBudget {
        budget: u64,
        scale: u32,
        partial: Vec<u64>,
    },

    #[error("state set is not a strongly connected component with a cycle")]
    NotStronglyConnected,

    #[error("missing dimension estimate for subhorseshoe {0}")]
    MissingEstimate(usize),

    #[error("invalid weight {0}: weights must be positive and finite")]
    InvalidWeight(f64),

    #[error("target dimension {eta} is outside the achievable range [0, {max}]")]
    EtaOutOfRange { eta: f64, max: f64 },

    #[error("state {0} is not present in the automaton")]
    UnknownState(String),

    #[error("component vanished after raising the threshold; pruning is not monotone")]
    ComponentVanished,

    #[error("no connecting word found: {0}")]
    ConnectorNotFound(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Resource errors map to exit status 2 in the command-line front end.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Budget { .. } | Error::CountBudget { .. })
    }
}
