use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("{what} of {got} exceeds the cap of {cap}")]
    Size {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("invalid state: {0}")]
    State(String),

    #[error("labeled stream is not realizable: {0}")]
    Realizability(String),

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("end of stream after {0} points")]
    EndOfStream(usize),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn size(what: &'static str, got: usize, cap: usize) -> Self {
        Error::Size { what, got, cap }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse { .. } | Error::Domain(_) => 2,
            Error::Infeasible(_) | Error::Size { .. } => 3,
            Error::Invariant(_) | Error::Realizability(_) => 4,
            _ => 1,
        }
    }
}
