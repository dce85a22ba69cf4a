use std::fmt;

use serde::Serialize;

pub const SCHEMA_VERSION: &str = "1";

/// Output document of every JSON-emitting command. Field order is fixed.
#[derive(Debug, Serialize)]
pub struct Envelope<I, R> {
    pub schema_version: &'static str,
    pub command: &'static str,
    pub inputs: I,
    pub result: R,
    pub warnings: Vec<String>,
}

impl<I: Serialize, R: Serialize> Envelope<I, R> {
    pub fn new(command: &'static str, inputs: I, result: R, warnings: Vec<String>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            inputs,
            result,
            warnings,
        }
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("envelope serializes");
        text.push('\n');
        text
    }
}

/// Process exit status. Only these four codes are ever returned.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Usage = 2,
    Undefined = 3,
    Io = 4,
}

#[derive(Debug)]
pub struct CliError {
    pub code: ExitCode,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: ExitCode::Usage,
            message: message.into(),
        }
    }

    pub fn io(path: &std::path::Path, err: impl fmt::Display) -> Self {
        Self {
            code: ExitCode::Io,
            message: format!("cannot write {}: {err}", path.display()),
        }
    }
}

impl From<conformity::Error> for CliError {
    fn from(err: conformity::Error) -> Self {
        let code = match err {
            conformity::Error::Domain { .. } | conformity::Error::Unbounded(_) => ExitCode::Undefined,
            conformity::Error::OutOfRange { .. } | conformity::Error::Invalid(_) => ExitCode::Usage,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
