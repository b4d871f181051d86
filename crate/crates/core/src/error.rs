//! Error type shared by every module of the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands belong to different field specifications.
    #[error("field spec mismatch: {0} vs {1}")]
    SpecMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid field parameter: {0}")]
    InvalidField(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("format error: {0}")]
    Format(String),

    /// Bad user-supplied parameter (maps to CLI exit code 2).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A configured budget would be exceeded (maps to CLI exit code 3).
    #[error("resource budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: String,
        needed: String,
        budget: String,
    },

    /// The annihilator linear system is not guaranteed a nontrivial kernel.
    #[error("infeasible annihilator: ({d_individual}+1)^{k} = {monomials} <= {constraints} constraints")]
    InfeasibleAnnihilator {
        k: usize,
        d_individual: u64,
        monomials: String,
        constraints: usize,
    },

    #[error("field too small: need at least {needed} elements, field has {order}")]
    FieldTooSmall { needed: String, order: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn budget(what: impl Into<String>, needed: impl ToString, budget: impl ToString) -> Self {
        Error::Budget {
            what: what.into(),
            needed: needed.to_string(),
            budget: budget.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
