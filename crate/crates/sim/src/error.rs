use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {origin}: {message}")]
    Parse { origin: String, message: String },
    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    Validation(Vec<String>),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("no records to write")]
    EmptyRecords,
    #[error("cannot write {path}: {message}")]
    Write { path: PathBuf, message: String },
    #[error("cannot start worker pool: {0}")]
    WorkerPool(String),
}

impl SimError {
    /// 2 for I/O and runtime failures, 1 for everything the user can fix in the input.
    pub fn exit_code(&self) -> i32 {
        match self {
            SimError::Io { .. } | SimError::Write { .. } | SimError::WorkerPool(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, SimError>;
