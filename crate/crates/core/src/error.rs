use alloc::string::String;

/// Errors raised by the computational core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("empty family: {0}")]
    EmptyFamily(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("singular curve: discriminant is zero")]
    SingularCurve,
    #[error("out of range: {0}")]
    Range(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("degenerate test function: phi(0) = 0")]
    DegenerateTestFunction,
    #[error("no prime inside the test-function support")]
    EmptySupport,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::Error::Domain(alloc::format!($($arg)*)) };
}
pub(crate) use domain;
