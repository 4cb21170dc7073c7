//! Library half of the `sgep` binary: argument types, command
//! implementations, and the exit-code policy. Kept as a lib so integration
//! tests can drive the commands without spawning processes.

pub mod args;
pub mod bench;
pub mod gen;
pub mod report;
pub mod solve;

use sgep::SgepError;

/// Command failure with its process exit code: 2 for input validation,
/// 3 for solver preconditions, 4 for an exceeded enumeration budget.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError { code: 2, message: msg.into() }
    }

    /// One-line machine-parseable error record.
    pub fn json(&self) -> String {
        serde_json::json!({ "error": self.message, "code": self.code }).to_string()
    }
}

impl From<SgepError> for CliError {
    fn from(e: SgepError) -> Self {
        let code = match &e {
            SgepError::BadInitialPoint(_)
            | SgepError::DegenerateIterate
            | SgepError::NotIdentityB
            | SgepError::InvalidStep { .. } => 3,
            SgepError::BudgetExceeded { .. } => 4,
            _ => 2,
        };
        CliError { code, message: e.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;
