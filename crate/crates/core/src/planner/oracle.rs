//! Reference solvers. Both iterate every state explicitly; neither shares
//! code with the sweeping planner.

use super::{PlannerError, QTable, RewardFn};
use crate::env::StateId;
use crate::model::CountModel;

const MAX_SWEEPS: usize = 5_000_000;

/// Synchronous value iteration on sparse rows until the largest change in
/// one sweep drops below `tol`.
pub fn value_iteration_oracle<R: RewardFn + ?Sized>(
    model: &CountModel,
    rewards: &R,
    gamma: f64,
    tol: f64,
) -> Result<QTable, PlannerError> {
    value_iteration_trace(model, rewards, gamma, tol).map(|(q, _)| q)
}

/// Same as [`value_iteration_oracle`] but also returns the per-sweep
/// sup-norm residuals.
pub(crate) fn value_iteration_trace<R: RewardFn + ?Sized>(
    model: &CountModel,
    rewards: &R,
    gamma: f64,
    tol: f64,
) -> Result<(QTable, Vec<f64>), PlannerError> {
    check(gamma, tol)?;
    let (n, na) = (model.n_states(), model.n_actions());

    // rewards are fixed for the whole solve
    struct Row {
        probs: Vec<(usize, f64)>,
        r_explicit: f64,
        rest: f64,
        background: f64,
    }
    let mut rows = Vec::with_capacity(n * na);
    for z in 0..n {
        for a in 0..na {
            let zs = StateId::new(z);
            let denom = model.row_denominator(zs, a);
            let mut probs = Vec::new();
            let mut r_explicit = 0.0;
            let mut r_obs = 0.0;
            for &(s, c) in model.row(zs, a) {
                let p = (model.alpha() * c as f64 + 1.0) / denom;
                let r = rewards.reward(model, zs, a, s);
                probs.push((s.index(), p));
                r_explicit += p * r;
                r_obs += r;
            }
            let background = 1.0 / denom;
            let rest = if probs.len() < n { background * (rewards.reward_sum(model, zs, a) - r_obs) } else { 0.0 };
            rows.push(Row { probs, r_explicit, rest, background });
        }
    }

    let mut q = QTable::new(n, na);
    let mut v = vec![0.0; n];
    let mut residuals = Vec::new();
    for _ in 0..MAX_SWEEPS {
        let v_all: f64 = v.iter().sum();
        let mut residual: f64 = 0.0;
        let mut next = QTable::new(n, na);
        for z in 0..n {
            if model.is_terminal(StateId::new(z)) {
                continue;
            }
            for a in 0..na {
                let row = &rows[z * na + a];
                let mut acc = row.r_explicit + row.rest;
                let mut v_obs = 0.0;
                for &(s, p) in &row.probs {
                    acc += p * gamma * v[s];
                    v_obs += v[s];
                }
                if row.probs.len() < n {
                    acc += row.background * gamma * (v_all - v_obs);
                }
                residual = residual.max((acc - q.get(StateId::new(z), a)).abs());
                next.set(StateId::new(z), a, acc);
            }
        }
        q = next;
        for (z, vz) in v.iter_mut().enumerate() {
            let zs = StateId::new(z);
            *vz = if model.is_terminal(zs) { 0.0 } else { q.max(zs) };
        }
        residuals.push(residual);
        if residual < tol {
            return Ok((q, residuals));
        }
    }
    Err(PlannerError::NotConverged(MAX_SWEEPS))
}

/// Brute-force value iteration over dense rows and every `(z, a, z')`
/// reward. Quadratic in `|Z|`; meant for small models.
pub fn dense_value_iteration<R: RewardFn + ?Sized>(
    model: &CountModel,
    rewards: &R,
    gamma: f64,
    tol: f64,
) -> Result<QTable, PlannerError> {
    check(gamma, tol)?;
    let (n, na) = (model.n_states(), model.n_actions());
    let mut p = Vec::with_capacity(n * na);
    let mut r = Vec::with_capacity(n * na);
    for z in 0..n {
        for a in 0..na {
            let zs = StateId::new(z);
            p.push(model.predict(zs, a).expect("indices in range"));
            r.push((0..n).map(|s| rewards.reward(model, zs, a, StateId::new(s))).collect::<Vec<_>>());
        }
    }
    let mut q = QTable::new(n, na);
    for _ in 0..MAX_SWEEPS {
        let v: Vec<f64> = (0..n)
            .map(|z| if model.is_terminal(StateId::new(z)) { 0.0 } else { q.max(StateId::new(z)) })
            .collect();
        let mut next = QTable::new(n, na);
        let mut residual: f64 = 0.0;
        for z in 0..n {
            if model.is_terminal(StateId::new(z)) {
                continue;
            }
            for a in 0..na {
                let k = z * na + a;
                let val: f64 = (0..n).map(|s| p[k][s] * (r[k][s] + gamma * v[s])).sum();
                residual = residual.max((val - q.get(StateId::new(z), a)).abs());
                next.set(StateId::new(z), a, val);
            }
        }
        q = next;
        if residual < tol {
            return Ok(q);
        }
    }
    Err(PlannerError::NotConverged(MAX_SWEEPS))
}

fn check(gamma: f64, tol: f64) -> Result<(), PlannerError> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(PlannerError::InvalidDiscount(gamma));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(PlannerError::InvalidTolerance(tol));
    }
    Ok(())
}
