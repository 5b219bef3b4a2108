use thiserror::Error;

/// Errors produced by the library and the command-line front end.
#[derive(Debug, Error)]
pub enum ChainError {
    /// Invalid user-supplied parameters (bad ranges, malformed config, ...).
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A numerical routine failed to reach its accuracy target or hit a
    /// domain restriction that only shows up at run time.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A mode cannot be mapped to its partner block because its coupling is
    /// below the resolvable floor.
    #[error("mode {index} has coupling kappa^2 = {kappa2:.3e}, below the mapping floor {floor:.3e}")]
    UnmappableMode {
        index: usize,
        kappa2: f64,
        floor: f64,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization failure: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ChainError>;

impl ChainError {
    pub fn config(msg: impl Into<String>) -> Self {
        ChainError::Config(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        ChainError::Numerical(msg.into())
    }

    /// Process exit code for the CLI: 2 for usage/config errors, 3 for
    /// numerical failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            ChainError::Config(_) => 2,
            ChainError::Numerical(_) | ChainError::UnmappableMode { .. } => 3,
            _ => 1,
        }
    }
}
