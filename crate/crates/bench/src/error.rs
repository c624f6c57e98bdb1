use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = BenchError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("missing required column `{0}`")]
    MissingColumn(String),

    #[error("row {row}, column `{column}`: cannot parse {value:?} as a number")]
    BadCell {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: response {value:?} is not one of Yes/No/yes/no/1/0")]
    BadResponse { row: usize, value: String },

    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("invalid dataset: {0}")]
    Data(probit_bf::Error),

    #[error("numerical failure{}: {source}", replication.map(|r| format!(" in replication {r}")).unwrap_or_default())]
    Numerical {
        replication: Option<usize>,
        source: probit_bf::Error,
    },

    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),

    #[error("cannot serialize output: {0}")]
    Serialize(#[from] serde_json::Error),
}

impl BenchError {
    pub fn numerical(source: probit_bf::Error) -> Self {
        BenchError::Numerical {
            replication: None,
            source,
        }
    }

    pub fn in_replication(self, r: usize) -> Self {
        match self {
            BenchError::Numerical { source, .. } => BenchError::Numerical {
                replication: Some(r),
                source,
            },
            other => other,
        }
    }

    /// Process exit code: 2 for configuration, 3 for data, 4 for numerical
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_) | BenchError::Write(_) | BenchError::Serialize(_) => 2,
            BenchError::Read { .. }
            | BenchError::MissingColumn(_)
            | BenchError::BadCell { .. }
            | BenchError::BadResponse { .. }
            | BenchError::Csv(_)
            | BenchError::Data(_) => 3,
            BenchError::Numerical { .. } => 4,
        }
    }
}
