//! Reports, file formats and command implementations behind the `toda`
//! binary. The symbolic and numeric work lives in `toda-core`; this
//! crate only orchestrates it and handles serialization.

pub mod commands;
pub mod dump;
pub mod exprjson;
pub mod golden;
pub mod output;
pub mod report;

/// Process-level failure classes, each with its own exit code
/// (verification failures are not errors; they exit 1 from `main`).
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    /// Malformed input values: wrong state length, unknown quantity
    /// names, bad ranges. Exit code 3.
    #[error("invalid input: {0}")]
    Input(String),
    /// Output could not be written. Exit code 4.
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    /// Internal computation failure (kernel errors surfaced verbatim).
    #[error("{0}")]
    Compute(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Input(_) => 3,
            AppError::Io { .. } => 4,
            AppError::Compute(_) => 4,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        AppError::Input(msg.into())
    }
}

pub type AppResult<T> = Result<T, AppError>;
