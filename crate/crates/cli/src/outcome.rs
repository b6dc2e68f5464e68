use std::io::Write;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};

use moufang::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    InputError,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::InputError => 2,
        }
    }
}

/// What every command prints: the JSON document goes to stdout and
/// `summary` to stderr.
#[derive(Debug, Serialize)]
pub struct CommandOutcome {
    pub command: &'static str,
    pub status: Status,
    pub payload: Value,
    #[serde(skip)]
    pub summary: String,
}

impl CommandOutcome {
    pub fn new(command: &'static str, status: Status, payload: Value, summary: impl Into<String>) -> Self {
        CommandOutcome { command, status, payload, summary: summary.into() }
    }

    pub fn pass_or_violation(command: &'static str, ok: bool, payload: Value, summary: impl Into<String>) -> Self {
        let status = if ok { Status::Pass } else { Status::Violation };
        Self::new(command, status, payload, summary)
    }

    /// Input, I/O, bound and precondition errors are the caller's problem
    /// (exit 2); anything else means a computed property did not hold (exit 1).
    pub fn from_error(command: &'static str, e: Error) -> Self {
        let status = match e {
            Error::Input(_) | Error::Io { .. } | Error::Bound { .. } | Error::Precondition(_) => Status::InputError,
            Error::TheoremViolation(_) | Error::Internal(_) => Status::Violation,
        };
        let message = e.to_string();
        let payload = match status {
            Status::Violation => json!({ "error": message, "witness": message }),
            _ => json!({ "error": message }),
        };
        Self::new(command, status, payload, format!("{command}: {message}"))
    }

    pub fn emit(&self) -> ExitCode {
        // serializing a Value cannot fail
        let doc = serde_json::to_string(self).expect("outcome serializes");
        // a closed pipe downstream is not our failure
        let _ = writeln!(std::io::stdout().lock(), "{doc}");
        let _ = writeln!(std::io::stderr().lock(), "{}", self.summary);
        ExitCode::from(self.status.exit_code())
    }
}
