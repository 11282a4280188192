use thiserror::Error;

/// Errors shared by the simulation crates.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A configuration failed validation (bad dimensions, empty sweeps, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Matrix shapes passed to an operation do not match the configuration.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A numerical routine failed (eigen solver, bisection bracket, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A stream is degenerate (zero effective gain) and the operation
    /// cannot proceed; the offending (user, stream) pair is named.
    #[error("degenerate stream (user {user}, stream {stream}): {detail}")]
    DegenerateStream {
        user: usize,
        stream: usize,
        detail: String,
    },

    /// A persisted file is malformed; `offset` is the byte position at
    /// which decoding failed.
    #[error("channel file format error at byte {offset}: {detail}")]
    Format { offset: u64, detail: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CoreError {
    pub fn config(msg: impl Into<String>) -> Self {
        CoreError::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        CoreError::Numerical(msg.into())
    }
}
