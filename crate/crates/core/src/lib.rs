//! Intrinsically motivated exploration in small gridworlds.
//!
//! A tabular agent learns a count-based transition model of a grid world
//! while acting greedily on action values planned under that model. The
//! reward it plans for is one of:
//!
//! * novelty, the surprise of the visited state,
//! * information gain, the expected change of the model's prediction,
//! * empowerment, the capacity of the action → next-state channel,
//! * a weighted sum or a product of the last two.
//!
//! The crate is split along those lines: [`env`] (ground-truth world),
//! [`model`] (counts and predictions), [`intrinsic`] (reward measures),
//! [`planner`] (prioritized sweeping and oracles) and [`harness`] (run
//! loops, metrics, heatmaps, exports and the command line).

pub mod env;
pub mod harness;
pub mod intrinsic;
pub mod model;
pub mod planner;

pub use env::{Action, Direction, Grid, GridEnv, Pose, StateId, TileKind};
pub use intrinsic::{RewardKind, RewardSpec};
pub use model::CountModel;
pub use planner::{Planner, QTable};
