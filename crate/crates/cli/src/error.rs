use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed command line.
    #[error("{0}")]
    Usage(String),
    /// Unreadable file or malformed document.
    #[error("parse error: {0}")]
    Parse(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    /// The document is well formed but contradicts itself.
    #[error("{0}")]
    Inconsistent(String),
    #[error("{0}")]
    Domain(#[from] contact_loci_core::Error),
    /// A self-test check failed; the report has already been written.
    #[error("{0} self-test check(s) failed")]
    Failed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io { .. } => 2,
            CliError::Inconsistent(_) | CliError::Domain(_) | CliError::Failed(_) => 1,
        }
    }
}
