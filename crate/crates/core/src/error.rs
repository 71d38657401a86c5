use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{a} is not coprime to {q}")]
    NotCoprime { a: u64, q: u64 },

    #[error("argument {x} outside the domain of {func}")]
    Domain { func: &'static str, x: f64 },

    #[error("kernel {kernel} is not finite at k={k} (a={a}) for q={q}")]
    KernelNotFinite {
        kernel: &'static str,
        q: u64,
        k: usize,
        a: u64,
    },

    #[error("numeric breakdown for q={q}: vanishing {what} at character index {j}")]
    NumericBreakdown { q: u64, j: usize, what: &'static str },

    #[error("invariant violated for q={q}: {detail}")]
    Invariant { q: u64, detail: String },

    #[error("q={0} is too large for the integrality check (limit 100)")]
    MagnitudeGuard(u64),

    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed CSV at line {line}: {detail}")]
    MalformedCsv { line: u64, detail: String },

    #[error("checkpoint mismatch for {path}: {detail}")]
    Checkpoint { path: PathBuf, detail: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
