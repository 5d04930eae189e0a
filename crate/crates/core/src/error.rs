use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Coefficients are not on the unit hypersphere (or the target sphere for circular params).
    #[error("squared coefficient norm {norm_sq} deviates from {target} beyond tolerance")]
    Norm { norm_sq: f64, target: f64 },

    #[error("invalid parameters: {0}")]
    ParameterDomain(String),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("data: {0}")]
    Data(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed document: {0}")]
    Document(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse error classes; the CLI maps these onto exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Usage(_) | Error::Domain(_) => ErrorClass::Usage,
            Error::Numerical(_) => ErrorClass::Numerical,
            Error::Norm { .. }
            | Error::ParameterDomain(_)
            | Error::Data(_)
            | Error::Parse { .. }
            | Error::Document(_)
            | Error::Io(_) => ErrorClass::Data,
        }
    }
}
