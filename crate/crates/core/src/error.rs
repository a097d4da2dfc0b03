use std::path::PathBuf;

use thiserror::Error;

/// A configuration value failed validation.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid config field `{field}`: {message}")]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),

    #[error("requested {requested} DUs but only {available} APs exist")]
    TooManyDus { requested: usize, available: usize },

    #[error("traffic field has no hotspots")]
    NoHotspots,

    #[error("distance {0} m is below the 1 m pathloss validity floor")]
    DistanceBelowFloor(f64),

    #[error("cluster of DU {du} is empty")]
    EmptyCluster { du: usize },

    #[error("cluster of DU {du} has {size} APs, brute force supports at most {max}")]
    ClusterTooLarge { du: usize, size: usize, max: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unknown DU id {0}")]
    UnknownDu(usize),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed document {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
