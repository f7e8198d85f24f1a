use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    Parse(String),

    #[error("party index {party} out of range in source {source_index} (n = {n})")]
    PartyOutOfRange {
        source_index: usize,
        party: usize,
        n: usize,
    },

    #[error("source {0} is empty")]
    EmptySource(usize),

    #[error("source {source_index} lists party {party} more than once")]
    RepeatedParty { source_index: usize, party: usize },

    #[error("invalid topology: {0}")]
    Topology(String),

    #[error("invalid parameters: {0}")]
    Bounds(String),

    #[error("weight vector has length {got}, topology has {want} parties")]
    WeightLength { got: usize, want: usize },

    #[error("per-source assignment {source_index} invalid: {reason}")]
    Assignment { source_index: usize, reason: String },

    #[error("state construction failed: {0}")]
    State(String),

    #[error("basis construction failed: {0}")]
    Basis(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("total dimension {0} exceeds the cap 2^14")]
    DimensionCap(usize),

    #[error("enumeration over {0} hidden-variable tuples exceeds the cap 10^7")]
    EnumerationCap(u128),

    #[error("response table for party {party} missing entry for source values {values:?}")]
    ResponseIncomplete { party: usize, values: Vec<usize> },

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-parsable category used by the CLI error prefix.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Parse(_) => "parse",
            Error::PartyOutOfRange { .. }
            | Error::EmptySource(_)
            | Error::RepeatedParty { .. }
            | Error::Topology(_) => "topology",
            Error::Bounds(_) | Error::WeightLength { .. } | Error::Assignment { .. } => "bounds",
            Error::State(_) | Error::Basis(_) => "state",
            Error::Dimension(_) | Error::DimensionCap(_) => "dimension",
            Error::EnumerationCap(_) => "cap",
            Error::ResponseIncomplete { .. } | Error::Distribution(_) => "input",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
