//! Experiment orchestration: configuration, initial-graph generation, seeded
//! trial execution, Monte-Carlo aggregation, and result export.

pub mod config;
pub mod export;
pub mod generate;
pub mod trial;

use thiserror::Error;

pub use config::{ConfigError, ExperimentConfig, InitialGraph, Scenario};
pub use generate::{generate_initial_graph, generate_regular_graph};
pub use trial::{
    map_seeds, run_attack, run_esd, run_lambda2_sweep, run_monte_carlo, run_monte_carlo_with,
    run_trial, summarize, Aggregate, AttackRun, EsdSummary, MonteCarloSummary, Parallelism,
    ProbeRow, SweepPoint, TerminalStatus, TrialResult, TrialSummary,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Graph(#[from] crate::graph::GraphError),
    #[error(transparent)]
    Spectral(#[from] crate::spectral::SpectralError),
    #[error(transparent)]
    Attack(#[from] crate::attack::AttackError),
}
