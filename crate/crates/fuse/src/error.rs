use thiserror::Error;

/// Errors raised while loading or running a scenario.
#[derive(Debug, Error)]
pub enum FuseError {
    #[error("cannot read `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{context}: {message}")]
    Validation { context: String, message: String },
    #[error("{context}: {source}")]
    Computation {
        context: String,
        #[source]
        source: evifuse_core::Error,
    },
    #[error("{failed} of {total} expected values deviate beyond tolerance")]
    Mismatch { failed: usize, total: usize },
}

impl FuseError {
    pub(crate) fn invalid(context: impl Into<String>, message: impl Into<String>) -> Self {
        FuseError::Validation {
            context: context.into(),
            message: message.into(),
        }
    }

    /// Process exit code: 1 validation, 2 computation, 3 fixture mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            FuseError::Io { .. } | FuseError::Syntax { .. } | FuseError::Validation { .. } => 1,
            FuseError::Computation { .. } => 2,
            FuseError::Mismatch { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, FuseError>;

/// Attaches a context label to core errors.
pub(crate) trait Context<T> {
    /// Input errors (bad masses, unknown atoms) become validation errors.
    fn invalid_in(self, context: impl FnOnce() -> String) -> Result<T>;
    fn computing(self, context: impl FnOnce() -> String) -> Result<T>;
}

impl<T> Context<T> for std::result::Result<T, evifuse_core::Error> {
    fn invalid_in(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|e| FuseError::invalid(context(), e.to_string()))
    }

    fn computing(self, context: impl FnOnce() -> String) -> Result<T> {
        self.map_err(|source| FuseError::Computation {
            context: context(),
            source,
        })
    }
}
