use std::fmt;

use tgii_core::Error;

/// Exit codes of the binary.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_FACTOR: i32 = 4;
pub const EXIT_NOT_APPLICABLE: i32 = 5;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

pub type CliResult<T> = Result<T, CliError>;

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Core(Error::FactorFound(_)) => EXIT_FACTOR,
            CliError::Core(Error::NotApplicable(_)) => EXIT_NOT_APPLICABLE,
            CliError::Core(Error::Serde(_)) => EXIT_USAGE,
            CliError::Core(_) => EXIT_MATH,
        }
    }

    /// Short machine-readable tag for --json output.
    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Usage(_) | CliError::Core(Error::Serde(_)) => "usage",
            CliError::Core(Error::FactorFound(_)) => "factor_found",
            CliError::Core(Error::NotApplicable(_)) => "not_applicable",
            CliError::Core(Error::Bottom | Error::SharedPrime(_)) => "bottom",
            CliError::Core(_) => "math",
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage: {m}"),
            CliError::Core(Error::FactorFound(d)) => {
                let bar = "!".repeat(60);
                write!(f, "{bar}\n!!! FACTOR FOUND: {d} divides N\n!!! the modulus is factored; nothing built on it is hidden\n{bar}")
            }
            CliError::Core(Error::Bottom) => write!(f, "⊥: shared degree"),
            CliError::Core(Error::SharedPrime(l)) => write!(f, "⊥: shared degree {l} (pass --ladder to compose through it)"),
            CliError::Core(e) => write!(f, "error: {e}"),
        }
    }
}
