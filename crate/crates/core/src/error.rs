use thiserror::Error;

/// Errors produced by construction and propagation routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("degenerate coupling: sqrt(|omega1|^2 + |omega2|^2) must be positive")]
    DegenerateCoupling,

    #[error("invalid parameter {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("numerical invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed document: {0}")]
    Malformed(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64) -> Self {
        Error::InvalidParameter { name, value }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
