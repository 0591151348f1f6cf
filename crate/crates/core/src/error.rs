use thiserror::Error;

/// Errors produced anywhere in the optimization framework.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid search space: {0}")]
    InvalidSpace(String),

    #[error("numeric error: {message}{}{}", fmt_position(.position), fmt_iteration(.iteration))]
    Numeric {
        message: String,
        position: Option<Vec<f64>>,
        iteration: Option<usize>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("io error: {0}")]
    Io(String),
}

fn fmt_position(position: &Option<Vec<f64>>) -> String {
    match position {
        Some(p) => format!(" at position {p:?}"),
        None => String::new(),
    }
}

fn fmt_iteration(iteration: &Option<usize>) -> String {
    match iteration {
        Some(t) => format!(" (iteration {t})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn numeric(message: impl Into<String>) -> Self {
        Error::Numeric {
            message: message.into(),
            position: None,
            iteration: None,
        }
    }

    /// Attach the iteration index to a numeric error; other variants pass through.
    pub fn at_iteration(self, t: usize) -> Self {
        match self {
            Error::Numeric {
                message, position, ..
            } => Error::Numeric {
                message,
                position,
                iteration: Some(t),
            },
            other => other,
        }
    }

    /// Short machine-readable kind tag, used by the CLI diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid-argument",
            Error::InvalidSpace(_) => "invalid-space",
            Error::Numeric { .. } => "numeric-error",
            Error::Config(_) => "config-error",
            Error::Contract(_) => "contract-error",
            Error::Io(_) => "io-error",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
