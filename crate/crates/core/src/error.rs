use thiserror::Error;

/// Errors produced by the algebra, decomposition and depth layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live on different variable registries")]
    RegistryMismatch,
    #[error("exponent overflow while computing {0}")]
    Overflow(&'static str),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("operation is undefined for the zero ideal")]
    ZeroIdeal,
    #[error("operation is undefined for the unit ideal")]
    UnitIdeal,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("capacity exceeded: {what} reached {size} (cap {cap})")]
    Capacity {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("time budget exceeded")]
    BudgetExceeded,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
