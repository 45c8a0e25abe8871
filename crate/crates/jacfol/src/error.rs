use thiserror::Error;

/// Errors surfaced by the analysis pipeline.
///
/// The variants are grouped by how the command-line driver maps them to exit
/// codes: input problems, violated analysis assumptions, failed theorem
/// checks, and internal consistency traps (the latter always indicate a bug).
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("assumption violation: {0}")]
    Assumption(String),

    #[error("theorem check failed: {0}")]
    TheoremCheck(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("truncation too short: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Exit code for the CLI: 2 input, 3 assumption, 4 theorem check, 5 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 2,
            Error::Assumption(_) | Error::Truncation(_) => 3,
            Error::TheoremCheck(_) => 4,
            Error::Internal(_) => 5,
        }
    }
}
