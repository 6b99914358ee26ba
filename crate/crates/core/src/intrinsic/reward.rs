//! Reward kinds, their combination, and the per-state cache the planner
//! reads during backups.

use super::empowerment::{channel_at, empowerment_ba, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use super::info::{anticipated_novelty, info_gain_predicted, novelty};
use super::IntrinsicError;
use crate::env::StateId;
use crate::model::CountModel;
use crate::planner::RewardFn;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RewardKind {
    Novelty,
    InfoGain,
    Empowerment,
    Sum,
    Product,
}

impl RewardKind {
    pub const ALL: [RewardKind; 5] =
        [RewardKind::Novelty, RewardKind::InfoGain, RewardKind::Empowerment, RewardKind::Sum, RewardKind::Product];

    pub fn as_str(self) -> &'static str {
        match self {
            RewardKind::Novelty => "novelty",
            RewardKind::InfoGain => "infogain",
            RewardKind::Empowerment => "empowerment",
            RewardKind::Sum => "sum",
            RewardKind::Product => "product",
        }
    }

    fn uses_info_gain(self) -> bool {
        matches!(self, RewardKind::InfoGain | RewardKind::Sum | RewardKind::Product)
    }

    fn uses_empowerment(self) -> bool {
        matches!(self, RewardKind::Empowerment | RewardKind::Sum | RewardKind::Product)
    }
}

impl fmt::Display for RewardKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RewardKind {
    type Err = IntrinsicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "novelty" => Ok(RewardKind::Novelty),
            "infogain" | "ig" => Ok(RewardKind::InfoGain),
            "empowerment" | "emp" => Ok(RewardKind::Empowerment),
            "sum" => Ok(RewardKind::Sum),
            "product" | "prod" => Ok(RewardKind::Product),
            _ => Err(IntrinsicError::UnknownReward(s.to_string())),
        }
    }
}

/// A reward kind plus the weights used by [`RewardKind::Sum`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardSpec {
    pub kind: RewardKind,
    pub w_ig: f64,
    pub w_emp: f64,
}

impl RewardSpec {
    /// Unit weights.
    pub fn new(kind: RewardKind) -> Self {
        RewardSpec { kind, w_ig: 1.0, w_emp: 1.0 }
    }

    pub fn weighted_sum(w_ig: f64, w_emp: f64) -> Result<Self, IntrinsicError> {
        RewardSpec { kind: RewardKind::Sum, w_ig, w_emp }.validated()
    }

    pub fn validated(self) -> Result<Self, IntrinsicError> {
        let ok = |w: f64| w.is_finite() && w > 0.0;
        if self.kind == RewardKind::Sum && !(ok(self.w_ig) && ok(self.w_emp)) {
            return Err(IntrinsicError::InvalidWeights(self.w_ig, self.w_emp));
        }
        Ok(self)
    }

    fn combine(&self, ig: f64, emp: f64) -> f64 {
        match self.kind {
            RewardKind::InfoGain => ig,
            RewardKind::Empowerment => emp,
            RewardKind::Sum => self.w_ig * ig + self.w_emp * emp,
            RewardKind::Product => ig * emp,
            RewardKind::Novelty => unreachable!("novelty is not a combination"),
        }
    }
}

impl Default for RewardSpec {
    fn default() -> Self {
        RewardSpec::new(RewardKind::Novelty)
    }
}

impl fmt::Display for RewardSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.as_str())
    }
}

impl FromStr for RewardSpec {
    type Err = IntrinsicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(RewardSpec::new(s.parse()?))
    }
}

/// Reward for the recorded transition `(z, a, z')`. The model must already
/// contain it.
pub fn intrinsic_reward(
    spec: &RewardSpec,
    model: &CountModel,
    z: StateId,
    a: usize,
    next: StateId,
) -> Result<f64, IntrinsicError> {
    if spec.kind == RewardKind::Novelty {
        return novelty(model, next);
    }
    let ig = if spec.kind.uses_info_gain() { info_gain_predicted(model, z, a)? } else { 0.0 };
    let emp = if spec.kind.uses_empowerment() {
        empowerment_ba(&channel_at(model, z)?, DEFAULT_TOL, DEFAULT_MAX_ITERS)?.value
    } else {
        0.0
    };
    Ok(spec.combine(ig, emp))
}

/// Cached rewards for planning.
///
/// Information gain depends only on the counts of its own `(z, a)` row and
/// empowerment only on the rows leaving `z`, so both are recomputed for a
/// single state after each observation ([`IntrinsicRewards::refresh`]).
/// Novelty inside backups is the value the agent would get on entering `z'`
/// now, `−ln((N(z') + 1) / (Σ N + 1))`, which stays finite for unvisited
/// states.
#[derive(Debug, Clone)]
pub struct IntrinsicRewards {
    spec: RewardSpec,
    n_actions: usize,
    info_gain: Vec<f64>,
    empowerment: Vec<f64>,
    ba_tol: f64,
    ba_max_iters: usize,
}

impl IntrinsicRewards {
    /// Cache for a model with no transitions yet.
    pub fn new(spec: RewardSpec, model: &CountModel) -> Result<Self, IntrinsicError> {
        let spec = spec.validated()?;
        let n = model.n_states() * model.n_actions();
        // every untried row looks the same
        let fresh = CountModel::new(model.n_states(), 1, Some(model.alpha()))?;
        let ig0 = if spec.kind.uses_info_gain() { info_gain_predicted(&fresh, StateId(0), 0)? } else { 0.0 };
        let mut out = IntrinsicRewards {
            spec,
            n_actions: model.n_actions(),
            info_gain: vec![ig0; n],
            empowerment: vec![0.0; model.n_states()],
            ba_tol: DEFAULT_TOL,
            ba_max_iters: DEFAULT_MAX_ITERS,
        };
        for z in 0..model.n_states() {
            if model.is_touched(StateId::new(z)) {
                out.refresh(model, StateId::new(z))?;
            }
        }
        Ok(out)
    }

    pub fn spec(&self) -> &RewardSpec {
        &self.spec
    }

    /// Recomputes the cached terms that depend on rows leaving `z`.
    pub fn refresh(&mut self, model: &CountModel, z: StateId) -> Result<(), IntrinsicError> {
        if self.spec.kind.uses_info_gain() {
            for a in 0..self.n_actions {
                self.info_gain[z.index() * self.n_actions + a] = info_gain_predicted(model, z, a)?;
            }
        }
        if self.spec.kind.uses_empowerment() {
            let ch = channel_at(model, z)?;
            self.empowerment[z.index()] = empowerment_ba(&ch, self.ba_tol, self.ba_max_iters)?.value;
        }
        Ok(())
    }

    pub fn info_gain(&self, z: StateId, a: usize) -> f64 {
        self.info_gain[z.index() * self.n_actions + a]
    }

    pub fn empowerment(&self, z: StateId) -> f64 {
        self.empowerment[z.index()]
    }

    /// The reward actually handed to the agent for `(z, a, z')`, read after
    /// the model and this cache were updated.
    pub fn online(&self, model: &CountModel, z: StateId, a: usize, next: StateId) -> Result<f64, IntrinsicError> {
        match self.spec.kind {
            RewardKind::Novelty => novelty(model, next),
            _ => Ok(self.spec.combine(self.info_gain(z, a), self.empowerment(z))),
        }
    }
}

impl RewardFn for IntrinsicRewards {
    fn reward(&self, model: &CountModel, z: StateId, a: usize, next: StateId) -> f64 {
        match self.spec.kind {
            RewardKind::Novelty => anticipated_novelty(model, next),
            _ => self.spec.combine(self.info_gain(z, a), self.empowerment(z)),
        }
    }

    fn reward_sum(&self, model: &CountModel, z: StateId, a: usize) -> f64 {
        let n = model.n_states() as f64;
        match self.spec.kind {
            RewardKind::Novelty => n * ((model.total_visits() + 1) as f64).ln() - model.log_visit_sum(),
            _ => n * self.spec.combine(self.info_gain(z, a), self.empowerment(z)),
        }
    }
}
