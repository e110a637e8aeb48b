use std::fmt;
use std::path::Path;

/// An error together with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    /// Validation or usage problem, exit code 1.
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 1, message: message.into() }
    }

    /// Filesystem problem, exit code 2.
    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self { code: 2, message: format!("{}: {err}", path.display()) }
    }
}

impl From<modvar::Error> for CliError {
    fn from(e: modvar::Error) -> Self {
        Self { code: if e.is_io() { 2 } else { 1 }, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}
