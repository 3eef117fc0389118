use std::fmt;
use std::path::Path;

/// Failures surfaced to the shell, each with a fixed exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed JSON, reported with the 1-based position serde saw.
    Parse { path: String, line: usize, column: usize, message: String },
    /// Unreadable files and semantically invalid inputs.
    Invalid(String),
    Dimension(String),
    NoCertificate(String),
    /// Failing verification properties, by name.
    Verify(Vec<String>),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Parse { .. } | CliError::Invalid(_) => 2,
            CliError::Dimension(_) => 3,
            CliError::NoCertificate(_) => 4,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Invalid(format!("{}: {e}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { path, line, column, message } => {
                write!(f, "parse error in {path} at line {line}, column {column}: {message}")
            }
            CliError::Invalid(m) => write!(f, "invalid input: {m}"),
            CliError::Dimension(m) => f.write_str(m),
            CliError::NoCertificate(m) => write!(f, "tail premise fails: {m}"),
            CliError::Verify(names) => write!(f, "failing properties: {}", names.join(", ")),
        }
    }
}

impl From<dualshadow::Error> for CliError {
    fn from(e: dualshadow::Error) -> Self {
        match e {
            dualshadow::Error::DimensionMismatch { .. } => CliError::Dimension(e.to_string()),
            dualshadow::Error::NoCertificate { .. } => CliError::NoCertificate(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}
