use thiserror::Error;

use crate::relterm::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("term contains `+`; expand it to a fixed k-fold product first")]
    PlusNotAllowed,

    #[error("k-fold expansion needs k >= {min}, got {k}")]
    InvalidK { k: usize, min: usize },

    #[error("universe size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("variable {0} has no relation bound to it")]
    UnboundVariable(String),

    #[error("element {element} is out of range for a universe of size {size}")]
    OutOfRange { element: usize, size: usize },

    #[error(
        "universe of size {size} is too large to enumerate (bound {bound}); use a variety-level check instead"
    )]
    EnumerationBound { size: usize, bound: usize },

    #[error("{what} exceeded the cap of {cap} elements ({partial} generated before aborting)")]
    CapExceeded {
        what: &'static str,
        cap: usize,
        partial: usize,
    },

    #[error("symbol {name} has arity {arity}, above the arity cap {cap}")]
    ArityCap {
        name: String,
        arity: usize,
        cap: usize,
    },

    #[error("term {0} is not regular")]
    NotRegular(String),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid condition: {0}")]
    InvalidCondition(String),
}

impl Error {
    /// True for the resource-limit family of errors (caps and enumeration bounds).
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::CapExceeded { .. } | Error::EnumerationBound { .. } | Error::ArityCap { .. }
        )
    }
}
