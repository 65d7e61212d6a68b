use thiserror::Error;

/// Exit status for a run whose checks all passed.
pub const EXIT_OK: i32 = 0;
/// Exit status when a checked property fails.
pub const EXIT_FAILURE: i32 = 1;
/// Exit status for unreadable, malformed or out-of-domain input.
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] geu::Error),
}
