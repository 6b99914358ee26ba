//! Intrinsic rewards: novelty, information gain, empowerment and their
//! combinations. All quantities are in nats.

mod empowerment;
mod info;
mod reward;

pub use empowerment::{
    channel_at, empowerment_ba, empowerment_uniform, mutual_information, Channel, EmpowermentResult, DEFAULT_MAX_ITERS,
    DEFAULT_TOL, ROW_SUM_TOL,
};
pub use info::{
    anticipated_novelty, entropy, info_gain_predicted, info_gain_retrospective, kl_divergence, novelty,
};
pub use reward::{intrinsic_reward, IntrinsicRewards, RewardKind, RewardSpec};

use crate::env::StateId;
use crate::model::ModelError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IntrinsicError {
    #[error("vectors have different lengths ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("q is zero at index {0} where p is positive")]
    NotAbsolutelyContinuous(usize),
    #[error("state {0} has never been visited")]
    Unvisited(StateId),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("sum weights must be positive, got ({0}, {1})")]
    InvalidWeights(f64, f64),
    #[error("unknown reward kind {0:?} (expected novelty, infogain, empowerment, sum or product)")]
    UnknownReward(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}
