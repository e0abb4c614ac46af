use std::fmt;

/// Errors surfaced by the lab, with the exit status the binary uses.
#[derive(Debug, Clone, PartialEq)]
pub enum LabError {
    /// Invalid flags or config values.
    Config(String),
    /// Reading inputs or writing artifacts failed.
    Io(String),
    /// A numerical operation refused or failed.
    Numeric(isoradial::Error),
}

impl LabError {
    pub fn config(m: impl Into<String>) -> Self {
        LabError::Config(m.into())
    }
    pub fn io(m: impl Into<String>) -> Self {
        LabError::Io(m.into())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            LabError::Config(_) => "config",
            LabError::Io(_) => "io",
            LabError::Numeric(e) => e.kind(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Config(_) => 2,
            LabError::Io(_) => 3,
            LabError::Numeric(_) => 1,
        }
    }

    /// One-line JSON for the error stream.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self.kind(), "message": self.to_string() }).to_string()
    }
}

impl fmt::Display for LabError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabError::Config(m) => write!(f, "invalid configuration: {m}"),
            LabError::Io(m) => write!(f, "{m}"),
            LabError::Numeric(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LabError {}

impl From<isoradial::Error> for LabError {
    fn from(e: isoradial::Error) -> Self {
        LabError::Numeric(e)
    }
}
