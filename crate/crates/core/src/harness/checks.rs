//! Self-checks behind the `oracle` subcommand.

use super::HarnessError;
use crate::intrinsic::{empowerment_ba, Channel, IntrinsicRewards, RewardSpec};
use crate::model::CountModel;
use crate::planner::{discount_for, value_iteration_oracle, Planner};

/// Capacity and ω* of the channel {a₀ → s₀, a₁ → uniform(s₀, s₁)}.
pub fn two_action_capacity(tol: f64, max_iters: usize) -> Result<(f64, Vec<f64>), HarnessError> {
    let ch = Channel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]])?;
    let r = empowerment_ba(&ch, tol, max_iters)?;
    Ok((r.value, r.omega))
}

/// Sup-norm gap between quiesced prioritized sweeping and value iteration
/// on a frozen model.
pub fn planner_gap(model: &CountModel, spec: RewardSpec, theta: f64, vi_tol: f64) -> Result<f64, HarnessError> {
    let rewards = IntrinsicRewards::new(spec, model)?;
    let gamma = discount_for(model.n_states())?;
    let mut planner = Planner::new(model.n_states(), model.n_actions(), gamma, theta)?;
    planner.sweep_to_quiescence(model, &rewards);
    let ps = planner.snapshot(model, &rewards);
    let vi = value_iteration_oracle(model, &rewards, gamma, vi_tol)?;
    Ok(ps.max_abs_diff(&vi))
}
