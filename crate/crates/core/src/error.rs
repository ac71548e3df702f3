use alloc::string::String;

/// Errors raised by the detection core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),
    /// Input data violates a structural invariant (ids, dimensions, self-loops).
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    Shape {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    /// A precondition on the experiment state does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(alloc::format!($($arg)*))
    };
}

macro_rules! schema {
    ($($arg:tt)*) => {
        $crate::error::Error::Schema(alloc::format!($($arg)*))
    };
}

pub(crate) use domain;
pub(crate) use schema;
