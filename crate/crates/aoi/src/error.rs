use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Everything the front end can fail with. [`AppError::exit_code`] maps each
/// case onto the process exit status.
#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Core(#[from] aoi_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("malformed reference data: {0}")]
    Golden(#[from] toml::de::Error),
    #[error("{0}")]
    Usage(String),
    #[error("check failed:\n{0}")]
    CheckFailed(String),
}

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        AppError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 for bad input, 2 for numerical trouble or failed checks.
    pub fn exit_code(&self) -> u8 {
        use aoi_core::Error as E;
        match self {
            AppError::Core(E::Singular(_) | E::NotConverged { .. } | E::NonFinite) => 2,
            AppError::CheckFailed(_) | AppError::Golden(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = AppError> = std::result::Result<T, E>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(AppError::Core(aoi_core::Error::ZeroRate).exit_code(), 1);
        assert_eq!(AppError::Core(aoi_core::Error::NonFinite).exit_code(), 2);
        assert_eq!(AppError::CheckFailed("x".into()).exit_code(), 2);
        assert_eq!(AppError::Config("x".into()).exit_code(), 1);
    }
}
