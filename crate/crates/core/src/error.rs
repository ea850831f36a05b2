use std::path::PathBuf;

use thiserror::Error;

use crate::graph::UserId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("user id {0} is out of range")]
    InvalidUser(UserId),
    #[error("team must not be empty")]
    EmptyTeam,
    #[error("cost model has no pricing parameters")]
    MissingPricing,
    #[error("pricing parameters must be positive (alpha={alpha}, beta={beta})")]
    InvalidPricing { alpha: f64, beta: f64 },
    #[error("network is already price-transformed")]
    AlreadyTransformed,
    #[error("network is not price-transformed")]
    NotTransformed,
    #[error("invalid network: {0}")]
    InvalidNetwork(String),
    #[error("invalid task: {0}")]
    InvalidTask(String),
    #[error("no remaining user adds coverage")]
    NoCandidate,
    #[error("instance too large for exhaustive search ({what}: {got} > {limit})")]
    SizeLimit {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("could not draw a feasible task after {0} attempts")]
    GenerationFailed(usize),
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
