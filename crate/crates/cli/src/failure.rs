use std::fmt;

/// Process exit codes. These values are a stable contract for scripts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    /// I/O or parse failure, including bad command-line usage.
    Parse = 1,
    /// Input parsed but violates an invariant.
    Validation = 2,
    /// `--expect-no-violation` was given and the scenario violates.
    Expectation = 3,
    /// An internal self-check failed.
    Verification = 4,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub code: ExitCode,
    pub message: String,
}

impl Failure {
    pub fn new(code: ExitCode, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Parse, message)
    }

    pub fn parse(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Parse, message)
    }

    pub fn validation(message: impl Into<String>) -> Self {
        Self::new(ExitCode::Validation, message)
    }

    pub fn prefixed(mut self, context: &str) -> Self {
        self.message = format!("{context}: {}", self.message);
        self
    }
}

impl From<chsh_core::Error> for Failure {
    fn from(e: chsh_core::Error) -> Self {
        let code = match e {
            chsh_core::Error::NoConvergence { .. } => ExitCode::Verification,
            _ => ExitCode::Validation,
        };
        Self::new(code, e.to_string())
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}
