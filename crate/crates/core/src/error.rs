use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("permutation length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{field}: not a bijection on 1..={len} ({detail})")]
    NotABijection {
        field: String,
        len: usize,
        detail: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid spec: {0}")]
    InvalidSpec(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error(
        "k = {k} exceeds the enumeration cap {cap} ({k}! coverings); \
         raise it with TUL_ENUM_CAP if you really mean it"
    )]
    CapExceeded { k: usize, cap: usize },

    #[error("contraction needs ~{terms:.3e} terms, above the budget {budget:.3e}")]
    BudgetExceeded { terms: f64, budget: f64 },

    #[error("wrong family: {0}")]
    WrongFamily(String),

    #[error("closed form disagrees with enumeration: {0}")]
    Mismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
