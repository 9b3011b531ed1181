//! Command-line front end: data generation, Flood and Čech persistence,
//! bottleneck comparison and stage benchmarks.

pub mod args;
pub mod commands;
pub mod io;

use flood_core::FloodError;

/// Errors surfaced to the shell. Each maps to an exit code and a stable
/// one-word tag printed as `error[TAG]: message`.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Guard(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Io(_) => 3,
            CliError::Guard(_) => 4,
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "USAGE",
            CliError::Data(_) => "DATA",
            CliError::Guard(_) => "GUARD",
            CliError::Io(_) => "IO",
        }
    }

    /// Single-line rendering for stderr.
    pub fn render(&self) -> String {
        format!("error[{}]: {}", self.tag(), self.to_string().replace('\n', " "))
    }
}

impl From<FloodError> for CliError {
    fn from(e: FloodError) -> Self {
        match e {
            FloodError::InvalidArgument(_) => CliError::Usage(e.to_string()),
            FloodError::Guard(_) => CliError::Guard(e.to_string()),
            FloodError::Degenerate(_) | FloodError::Integrity(_) | FloodError::Generation(_) => {
                CliError::Data(e.to_string())
            }
        }
    }
}
