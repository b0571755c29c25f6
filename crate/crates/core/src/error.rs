use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration at `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid market instance: {0}")]
    InvalidInstance(String),

    #[error("unsupported scope: {0}")]
    UnsupportedScope(String),

    #[error("threshold search failed: {0}")]
    Search(String),

    #[error("allocation rule contract violated: {0}")]
    ContractViolation(String),

    #[error("instance too large: {n} agents, at most {max} supported")]
    SizeLimit { n: usize, max: usize },

    #[error("degenerate market: {0}")]
    DegenerateMarket(String),

    #[error("{}: parse error{}: {message}", location(path, *line), fmt_field(field))]
    Parse {
        path: PathBuf,
        line: Option<usize>,
        field: String,
        message: String,
    },

    #[error("{}: validation error{}: {message}", location(path, *line), fmt_field(field))]
    Validation {
        path: PathBuf,
        line: Option<usize>,
        field: String,
        message: String,
    },

    #[error("schema version mismatch: found {found}, expected {expected}")]
    SchemaMismatch { found: u32, expected: u32 },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed record: {0}")]
    Record(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn location(path: &std::path::Path, line: Option<usize>) -> String {
    match line {
        Some(l) => format!("{}:{l}", path.display()),
        None => path.display().to_string(),
    }
}

fn fmt_field(field: &str) -> String {
    if field.is_empty() {
        String::new()
    } else {
        format!(" at `{field}`")
    }
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command-line front end.
    ///
    /// 1 for configuration and input problems, 2 for I/O, 3 for broken internal invariants.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 2,
            Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}
