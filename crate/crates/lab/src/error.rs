use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("cannot parse experiment spec: {0}")]
    Toml(#[from] toml::de::Error),
    #[error(transparent)]
    Model(#[from] wrig::Error),
    #[error("cannot read {path}: {source}")]
    Input {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("audit failed at point {point}, trial {trial}: {msg}")]
    Audit {
        point: usize,
        trial: usize,
        msg: String,
    },
    #[error("no trial records to summarize")]
    Empty,
    #[error("thread pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;

/// Process exit codes of the `wrig-lab` binary.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INVALID_INPUT: u8 = 1;
    pub const RUNTIME: u8 = 2;
    pub const NOT_TERMINATED: u8 = 3;
}

impl LabError {
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Spec(_) | LabError::Toml(_) | LabError::Model(_) | LabError::Input { .. } => {
                exit::INVALID_INPUT
            }
            _ => exit::RUNTIME,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}
