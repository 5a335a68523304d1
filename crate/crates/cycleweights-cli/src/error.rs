//! Error-to-exit-code mapping: 2 configuration, 3 numeric, 4 verification.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config file, out-of-range sizes. Exit 2.
    Config(String),
    /// A computation failed (solver, overflow, truncation guard). Exit 3.
    Numeric(String),
    /// One or more verification rows failed. Exit 4.
    Verification(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numeric failure: {msg}"),
            CliError::Verification(n) => write!(f, "verification failed: {n} check(s) failed"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<cycleweights::WeightError> for CliError {
    fn from(e: cycleweights::WeightError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<cycleweights::ExactError> for CliError {
    fn from(e: cycleweights::ExactError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<cycleweights::SaddleError> for CliError {
    fn from(e: cycleweights::SaddleError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<cycleweights::LimitsError> for CliError {
    fn from(e: cycleweights::LimitsError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<cycleweights::montecarlo::McError> for CliError {
    fn from(e: cycleweights::montecarlo::McError) -> Self {
        CliError::Numeric(e.to_string())
    }
}
