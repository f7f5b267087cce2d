use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the dynamics and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An input value outside the domain of the map.
    #[error("{name} = {value} is outside [0, 1]")]
    Domain { name: &'static str, value: f64 },

    /// A model parameter outside its admissible range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A root-finding bracket without a sign change.
    #[error("no sign change on [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
