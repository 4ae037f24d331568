//! Command-line front end: configure runs from a JSON config or flags,
//! execute scheme simulations and scans, and emit CSV/JSON datasets.

pub mod config;
pub mod reproduce;
pub mod run;

/// CLI failures mapped onto the documented exit codes: 2 for usage/config
/// problems (including unwritable outputs), 3 for numerical invariant
/// violations.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

impl CliError {
    pub fn config(e: raman_ctrl::Error) -> Self {
        CliError::Config(e.to_string())
    }

    /// Invariant violations keep their own exit code; everything else a core
    /// routine reports at run time is a configuration problem.
    pub fn numeric(e: raman_ctrl::Error) -> Self {
        match e {
            raman_ctrl::Error::InvariantViolation(msg) => CliError::Numeric(msg),
            other => CliError::Config(other.to_string()),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Numeric(msg) => write!(f, "numerical invariant violated: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
