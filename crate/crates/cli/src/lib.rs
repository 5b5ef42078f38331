//! Experiment runner for the `optcoef` library.
//!
//! A run is described by an [`ExperimentConfig`], built from an optional
//! `key = value` file with command-line flags layered on top.

pub mod config;
mod run;

pub use config::{
    parse_config, parse_settings, Domain, Experiment, ExperimentConfig, MeshSpec, PenaltyChoice, Settings,
};
pub use run::{execute, run, Artifacts};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("invalid {field}: {message}")]
    Value { field: &'static str, message: String },
    #[error("no experiment given (use --experiment or `experiment = ...`)")]
    MissingExperiment,
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Driver(#[from] optcoef::Error),
    #[error("writing outputs: {0}")]
    Io(#[from] std::io::Error),
}
