//! Value computation under the learned model: Q-table, Bellman backups,
//! prioritized sweeping, a value-iteration oracle and greedy selection.
//!
//! Every backup uses the full smoothed row
//!
//! ```text
//! Q(z,a) = Σ_z' p(z'|z,a) · [ r(z,a,z') + γ · max_a' Q(z',a') ]
//! ```
//!
//! with the successor term fixed to 0 for terminal `z'`. Rows are stored
//! sparsely, so the sum over never-observed successors is folded into one
//! background term using `Σ_z' r(z,a,z')` and `Σ_z' V(z')`.

mod oracle;
mod policy;
mod queue;
mod sweep;

pub use oracle::{dense_value_iteration, value_iteration_oracle};
pub use policy::greedy_action;
pub use queue::SweepQueue;
pub use sweep::{Planner, DEFAULT_THETA};

use crate::env::StateId;
use crate::model::CountModel;
use serde::Serialize;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlannerError {
    #[error("discount needs at least 2 states, got {0}")]
    TooFewStates(usize),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("value iteration did not converge within {0} sweeps")]
    NotConverged(usize),
    #[error("discount must lie in [0, 1), got {0}")]
    InvalidDiscount(f64),
}

/// `γ = 0.5^(2/|Z|)`: rewards half a state space away count half.
pub fn discount_for(n_states: usize) -> Result<f64, PlannerError> {
    if n_states < 2 {
        return Err(PlannerError::TooFewStates(n_states));
    }
    Ok(0.5f64.powf(2.0 / n_states as f64))
}

/// Rewards as seen by the planner.
pub trait RewardFn {
    fn reward(&self, model: &CountModel, z: StateId, a: usize, next: StateId) -> f64;

    /// `Σ_z' r(z, a, z')` over the whole state space. Override when a closed
    /// form exists.
    ///
    /// The planner treats all untouched, non-terminal states as one class, so
    /// implementations must return the same value for every such `z`.
    fn reward_sum(&self, model: &CountModel, z: StateId, a: usize) -> f64 {
        (0..model.n_states()).map(|i| self.reward(model, z, a, StateId::new(i))).sum()
    }
}

impl<F> RewardFn for F
where
    F: Fn(&CountModel, StateId, usize, StateId) -> f64,
{
    fn reward(&self, model: &CountModel, z: StateId, a: usize, next: StateId) -> f64 {
        self(model, z, a, next)
    }
}

/// Dense `|Z| × |A|` action values.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    n_states: usize,
    n_actions: usize,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct QRecord {
    z: usize,
    a: usize,
    value: f64,
}

impl QTable {
    /// All zeros.
    pub fn new(n_states: usize, n_actions: usize) -> Self {
        QTable { n_states, n_actions, values: vec![0.0; n_states * n_actions] }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn get(&self, z: StateId, a: usize) -> f64 {
        self.values[z.index() * self.n_actions + a]
    }

    pub fn set(&mut self, z: StateId, a: usize, v: f64) {
        self.values[z.index() * self.n_actions + a] = v;
    }

    pub fn row(&self, z: StateId) -> &[f64] {
        let i = z.index() * self.n_actions;
        &self.values[i..i + self.n_actions]
    }

    pub fn row_mut(&mut self, z: StateId) -> &mut [f64] {
        let i = z.index() * self.n_actions;
        &mut self.values[i..i + self.n_actions]
    }

    pub fn max(&self, z: StateId) -> f64 {
        self.row(z).iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest absolute entry-wise difference.
    pub fn max_abs_diff(&self, other: &QTable) -> f64 {
        assert_eq!(self.values.len(), other.values.len(), "tables differ in shape");
        self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// CSV with header `z,a,value`, one row per entry.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for z in 0..self.n_states {
            for a in 0..self.n_actions {
                w.serialize(QRecord { z, a, value: self.values[z * self.n_actions + a] })?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

/// One textbook backup of `Q(z, a)` against the values currently stored in
/// `q`. Returns the new value and `|new − old|`.
pub fn bellman_backup<R: RewardFn + ?Sized>(
    q: &mut QTable,
    model: &CountModel,
    rewards: &R,
    gamma: f64,
    z: StateId,
    a: usize,
) -> (f64, f64) {
    let value = |s: StateId| if model.is_terminal(s) { 0.0 } else { q.max(s) };
    let v_all: f64 = (0..model.n_states()).map(|i| value(StateId::new(i))).sum();
    let row = model.predict_row_unchecked(z, a);
    let (mut acc, mut r_obs, mut v_obs) = (0.0, 0.0, 0.0);
    for &(s, p) in &row.entries {
        let (r, v) = (rewards.reward(model, z, a, s), value(s));
        acc += p * (r + gamma * v);
        r_obs += r;
        v_obs += v;
    }
    if row.background_count() > 0 {
        acc += row.background * ((rewards.reward_sum(model, z, a) - r_obs) + gamma * (v_all - v_obs));
    }
    let old = q.get(z, a);
    q.set(z, a, acc);
    (acc, (acc - old).abs())
}
