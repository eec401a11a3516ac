use thiserror::Error;

/// Exit codes: 0 success, 1 usage or configuration error, 2 simulation
/// abort. Stable across releases.
pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_ABORT: i32 = 2;

#[derive(Error, Debug)]
pub enum CliError {
    /// TOML syntax problem; the message carries line and column.
    #[error("parse error in {origin}: {message}")]
    Parse { origin: String, message: String },

    /// A parameter violates its invariant.
    #[error("invalid configuration: {0}")]
    Validation(String),

    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("no preset or file named '{0}'")]
    UnknownConfig(String),
}
