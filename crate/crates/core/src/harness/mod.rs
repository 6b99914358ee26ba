//! Run loops, seed suites, heatmaps, exports and the command line.

pub mod checks;
pub mod cli;
mod config;
pub mod export;
mod heatmap;
mod metrics;
mod run;

pub use config::{ConfigFile, EnvSpec, RunConfig};
pub use heatmap::{heatmap, HeatField, HeatMetric};
pub use metrics::{aggregate, all_specs, mean_stderr, run_suite, MetricSeries};
pub use run::{random_walk_model, run_single, seeded_streams, train, Agent, RunLog, StepRecord, Trained};

use crate::env::{EnvError, LayoutError};
use crate::intrinsic::IntrinsicError;
use crate::model::ModelError;
use crate::planner::PlannerError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Env(#[from] EnvError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Intrinsic(#[from] IntrinsicError),
    #[error(transparent)]
    Planner(#[from] PlannerError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("one or more checks failed")]
    CheckFailed,
}
