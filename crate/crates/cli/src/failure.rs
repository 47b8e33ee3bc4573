use std::fmt::Display;
use std::process::ExitCode;

use serde_json::json;

/// A failed run, reported as `{"error": kind, "message": ...}` on stdout.
#[derive(Debug)]
pub struct Failure {
    pub kind: &'static str,
    pub message: String,
    pub exit: u8,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { kind: "Usage", message: message.into(), exit: 2 }
    }

    pub fn io(path: impl std::fmt::Debug, e: &std::io::Error) -> Self {
        Failure { kind: "Io", message: format!("{path:?}: {e}"), exit: 2 }
    }

    pub fn context(self, what: impl Display) -> Self {
        Failure { message: format!("{what}: {}", self.message), ..self }
    }

    pub fn report(&self) -> ExitCode {
        let body = json!({ "error": self.kind, "message": self.message });
        println!("{}", serde_json::to_string_pretty(&body).expect("JSON values serialize"));
        ExitCode::from(self.exit)
    }
}

impl From<pvcoh::Error> for Failure {
    fn from(e: pvcoh::Error) -> Self {
        Failure { kind: e.kind(), message: e.to_string(), exit: 1 }
    }
}
