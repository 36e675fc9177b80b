use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{0}")]
    Algebra(String),

    #[error("{0}")]
    Geometry(String),

    #[error("{0}")]
    Domain(String),

    #[error("sampling at t = {t} aliases: wavenumber {wavenumber} exceeds the admissible {limit} (max admissible |t| = {max_t})")]
    Nyquist {
        t: f64,
        wavenumber: f64,
        limit: f64,
        max_t: f64,
    },

    #[error("already converged: successive solutions differ by less than roundoff")]
    AlreadyConverged,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }
}
