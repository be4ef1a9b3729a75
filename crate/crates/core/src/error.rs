use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("run length k must satisfy 1 <= k <= {max}, got {k}")]
    InvalidRunLength { k: u64, max: u32 },

    #[error("requested table up to n = {requested} exceeds the capacity of {cap} entries")]
    Capacity { requested: usize, cap: usize },

    #[error("exhaustive enumeration is limited to n <= {cap}, got n = {n}")]
    ExhaustionCap { n: u32, cap: u32 },

    #[error("{0}")]
    Domain(String),

    #[error("denominator 1 - 2r + r^(k+1) = {denominator} vanishes at r = {r}")]
    Singularity { r: String, denominator: String },

    #[error("invalid simulation config: {0}")]
    Config(String),

    #[error("cannot parse {input:?} as an exact rational")]
    Parse { input: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for errors caused by resource guardrails rather than bad input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. } | Error::ExhaustionCap { .. })
    }
}
