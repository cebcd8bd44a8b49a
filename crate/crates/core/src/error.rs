use thiserror::Error;

use crate::baselines::OracleError;
use crate::config::ConfigError;
use crate::laml::EngineError;
use crate::network::DeploymentError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    ConfigInvalid(#[from] ConfigError),
    #[error(transparent)]
    Deployment(#[from] DeploymentError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
    #[error("deployment has no targets; lifetime is unbounded")]
    NoTargets,
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
