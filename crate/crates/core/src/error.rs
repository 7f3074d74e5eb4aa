use thiserror::Error;

use crate::coalition::MAX_PLAYERS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("player count {0} is outside the supported range 2..={MAX_PLAYERS}")]
    PlayerCount(usize),

    #[error("player label at position {0} is empty")]
    EmptyLabel(usize),

    #[error("duplicate player label `{0}`")]
    DuplicateLabel(String),

    #[error("player index {index} is out of range for {n} players")]
    PlayerOutOfRange { index: usize, n: usize },

    #[error("unknown player label `{0}`")]
    UnknownLabel(String),

    #[error("table has {got} entries, expected 2^{n} = {}", 1usize << .n)]
    TableSize { n: usize, got: usize },

    #[error("value at coalition {coalition:#b} is not finite")]
    NonFinite { coalition: u32 },

    #[error("the empty coalition must have value 0, got {0}")]
    NonzeroEmpty(f64),

    #[error("game is not simple: v({coalition:#b}) = {value}")]
    NotSimple { coalition: u32, value: f64 },

    #[error("weight of player `{0}` is negative or not finite")]
    InvalidWeight(String),

    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },

    #[error("quota must be positive and finite, got {0}")]
    InvalidQuota(f64),

    #[error("quota {quota} exceeds total weight {total}: the grand coalition cannot win")]
    QuotaExceedsTotal { quota: f64, total: f64 },

    #[error("player {player} belongs to coalition {coalition:#b}")]
    PlayerInCoalition { player: usize, coalition: u32 },

    #[error("cohesion of coalition {coalition:#b} is negative or not finite: {value}")]
    InvalidCohesion { coalition: u32, value: f64 },

    #[error("cohesion structure is not admissible: singleton {{{label}}} has cohesion {value}")]
    NotAdmissible { label: String, value: f64 },

    #[error("coalition probabilities for player `{label}` have a zero normalizing sum")]
    DegenerateDenominator { label: String },

    #[error("scale factor must be positive and finite, got {0}")]
    InvalidScale(f64),

    #[error("cohesion exponent must lie in [0, {max}], got {value}", max = crate::values::MAX_EXPONENT)]
    InvalidExponent { value: f64 },

    #[error("size weights are invalid: {0}")]
    InvalidSizeWeights(String),

    #[error("permutation enumeration supports at most {max} players, got {n}")]
    OracleTooLarge { n: usize, max: usize },

    #[error("invalid permutation of {0} players")]
    InvalidPermutation(usize),

    #[error("functional `{0}` exposes no coalition distribution")]
    NoDistribution(String),

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),

    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),

    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub(crate) fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            message: message.into(),
        }
    }

    /// True for errors caused by malformed input documents or arguments, as
    /// opposed to degenerate computations on valid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Schema { .. }
                | Error::UnknownScenario(_)
                | Error::UnknownDataset(_)
                | Error::Io { .. }
                | Error::UnknownLabel(_)
                | Error::DuplicateLabel(_)
                | Error::EmptyLabel(_)
                | Error::PlayerCount(_)
                | Error::QuotaExceedsTotal { .. }
                | Error::InvalidQuota(_)
                | Error::InvalidWeight(_)
                | Error::InvalidExponent { .. }
                | Error::InvalidCohesion { .. }
                | Error::NotAdmissible { .. }
                | Error::NonzeroEmpty(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
