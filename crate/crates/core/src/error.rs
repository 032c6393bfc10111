use thiserror::Error;

/// Errors produced by parsing, mining, proving and verification.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid item id {0:?}")]
    InvalidItem(String),

    #[error("invalid itemset: {0}")]
    InvalidItemset(String),

    #[error("probability {0} outside (0, 1]")]
    ProbabilityRange(f64),

    #[error("transaction index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A state-space or enumeration limit was hit.
    #[error("guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("missing weight for item {0}")]
    MissingWeight(String),

    #[error("scheme {0} requires a weight assignment")]
    WeightsRequired(&'static str),

    #[error("missing claim for itemset {0}")]
    MissingClaim(String),

    #[error("missing side data: {0}")]
    MissingSideData(String),

    #[error("database is not deterministic")]
    NotDeterministic,

    #[error("materialized probability {0} exceeds 1")]
    MaterializationOverflow(f64),

    #[error("scheme {scheme} cannot be used with {context}")]
    IncompatibleScheme {
        scheme: &'static str,
        context: String,
    },

    #[error("negative variance {0}")]
    NegativeVariance(f64),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
