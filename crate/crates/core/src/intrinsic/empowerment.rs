//! One-step empowerment: the capacity of the action → next-state channel at
//! a fixed state, via Blahut–Arimoto, plus the uniform-policy shortcut.

use super::IntrinsicError;
use crate::env::StateId;
use crate::model::CountModel;

/// Tolerance on each row's total probability.
pub const ROW_SUM_TOL: f64 = 1e-9;

/// Default stopping gap between the capacity bounds.
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 200;

/// Conditional distributions `P[a][j]`, one row per action.
///
/// Columns can carry a multiplicity: column `j` stands for `weights[j]`
/// identical outputs each of probability `P[a][j]`. The count model uses this
/// to fold all never-observed successors into one column.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    rows: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl Channel {
    /// Plain channel, each column one output.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self, IntrinsicError> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        Channel::with_multiplicities(rows, vec![1.0; n])
    }

    pub fn with_multiplicities(rows: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self, IntrinsicError> {
        if rows.is_empty() || weights.is_empty() {
            return Err(IntrinsicError::InvalidChannel("channel needs at least one row and one column".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(IntrinsicError::InvalidChannel(format!("column multiplicity {w} is not positive")));
        }
        for (a, row) in rows.iter().enumerate() {
            if row.len() != weights.len() {
                return Err(IntrinsicError::InvalidChannel(format!(
                    "row {a} has {} entries, expected {}",
                    row.len(),
                    weights.len()
                )));
            }
            if row.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
                return Err(IntrinsicError::InvalidChannel(format!("row {a} has a negative or non-finite entry")));
            }
            let sum: f64 = row.iter().zip(&weights).map(|(p, w)| p * w).sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(IntrinsicError::InvalidChannel(format!("row {a} sums to {sum}")));
            }
        }
        Ok(Channel { rows, weights })
    }

    pub fn n_actions(&self) -> usize {
        self.rows.len()
    }

    /// Number of distinct columns (not counting multiplicity).
    pub fn n_columns(&self) -> usize {
        self.weights.len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Per-action divergences `D_a = Σ_j w_j P_aj ln(P_aj / q_j)` where
    /// `q = Σ_a ω_a P_a`.
    fn divergences(&self, omega: &[f64], q: &mut [f64], d: &mut [f64]) {
        q.iter_mut().for_each(|x| *x = 0.0);
        for (row, &w) in self.rows.iter().zip(omega) {
            for (qj, &p) in q.iter_mut().zip(row) {
                *qj += w * p;
            }
        }
        for (da, row) in d.iter_mut().zip(&self.rows) {
            *da = row
                .iter()
                .zip(q.iter())
                .zip(&self.weights)
                .filter(|((&p, _), _)| p > 0.0)
                .map(|((&p, &qj), &w)| w * p * (p / qj).ln())
                .sum();
        }
    }
}

/// Capacity and the action distribution that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpowermentResult {
    /// Nats, in `[0, ln n_actions]`.
    pub value: f64,
    /// Maximizing action distribution ω*.
    pub omega: Vec<f64>,
    pub iterations: usize,
}

/// `I(Z'; A)` under the action distribution `omega`.
pub fn mutual_information(channel: &Channel, omega: &[f64]) -> Result<f64, IntrinsicError> {
    if omega.len() != channel.n_actions() {
        return Err(IntrinsicError::LengthMismatch(omega.len(), channel.n_actions()));
    }
    let mut q = vec![0.0; channel.n_columns()];
    let mut d = vec![0.0; channel.n_actions()];
    channel.divergences(omega, &mut q, &mut d);
    Ok(omega.iter().zip(&d).map(|(w, d)| w * d).sum::<f64>().max(0.0))
}

/// Blahut–Arimoto from a uniform start. Stops when the upper bound
/// `max_a D_a` and the lower bound `ln Σ ω_a e^{D_a}` are closer than `tol`,
/// or after `max_iters` updates.
pub fn empowerment_ba(channel: &Channel, tol: f64, max_iters: usize) -> Result<EmpowermentResult, IntrinsicError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(IntrinsicError::InvalidTolerance(tol));
    }
    let n = channel.n_actions();
    let mut omega = vec![1.0 / n as f64; n];
    let mut q = vec![0.0; channel.n_columns()];
    let mut d = vec![0.0; n];
    let mut iterations = 0;
    loop {
        channel.divergences(&omega, &mut q, &mut d);
        let dmax = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        // shift by dmax so the exponentials stay ≤ 1
        let scaled: Vec<f64> = omega.iter().zip(&d).map(|(w, da)| w * (da - dmax).exp()).collect();
        let z: f64 = scaled.iter().sum();
        let lower = dmax + z.ln();
        if dmax - lower < tol || iterations >= max_iters {
            break;
        }
        for (w, s) in omega.iter_mut().zip(&scaled) {
            *w = s / z;
        }
        iterations += 1;
    }
    let value: f64 = omega.iter().zip(&d).map(|(w, da)| w * da).sum();
    let cap = (n as f64).ln();
    Ok(EmpowermentResult { value: value.clamp(0.0, cap), omega, iterations })
}

/// `H(Z') − H(Z' | A)` under uniformly random actions.
pub fn empowerment_uniform(channel: &Channel) -> f64 {
    let n = channel.n_actions();
    mutual_information(channel, &vec![1.0 / n as f64; n]).expect("uniform policy has the right length")
}

/// The learned channel at `z`, compressed: one column per successor observed
/// from any action, plus one column for all the rest.
pub fn channel_at(model: &CountModel, z: StateId) -> Result<Channel, IntrinsicError> {
    let rows: Vec<_> = (0..model.n_actions()).map(|a| model.predict_row(z, a)).collect::<Result<_, _>>()?;
    let mut support: Vec<StateId> = rows.iter().flat_map(|r| r.entries.iter().map(|e| e.0)).collect();
    support.sort_unstable();
    support.dedup();
    let rest = model.n_states() - support.len();

    let mut weights = vec![1.0; support.len()];
    if rest > 0 {
        weights.push(rest as f64);
    }
    let matrix = rows
        .iter()
        .map(|row| {
            let mut out: Vec<f64> = support.iter().map(|&s| row.prob(s)).collect();
            if rest > 0 {
                out.push(row.background);
            }
            out
        })
        .collect();
    Channel::with_multiplicities(matrix, weights)
}
