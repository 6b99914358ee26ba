//! Count-based world model.
//!
//! Transitions are counted per `(z, a, z')` and turned into a smoothed
//! predictive distribution
//!
//! ```text
//! p(z' | z, a) = (α·N(z,a,z') + 1) / (α·N(z,a) + |Z|)
//! ```
//!
//! where `N(z,a) = Σ_z' N(z,a,z')`. With the default `α = 100·|Z|` a single
//! observation moves almost all of the mass off the uniform prior.
//!
//! Counts are kept sparsely per `(z, a)` row; every successor that was never
//! observed from a row shares the same background probability `1 / denom`.

use crate::env::StateId;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("model dimensions must be positive (states {n_states}, actions {n_actions})")]
    InvalidDimensions { n_states: usize, n_actions: usize },
    #[error("update factor must be positive and finite, got {0}")]
    InvalidAlpha(f64),
    #[error("state {0} out of range")]
    StateOutOfRange(StateId),
    #[error("action {0} out of range")]
    ActionOutOfRange(usize),
    #[error("model has no recorded visits")]
    EmptyModel,
    #[error("malformed table: {0}")]
    Table(String),
}

/// One predictive row in sparse form.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseRow {
    /// Observed successors and their probabilities, sorted by state.
    pub entries: Vec<(StateId, f64)>,
    /// Probability of each successor not listed in `entries`.
    pub background: f64,
    pub n_states: usize,
}

impl SparseRow {
    pub fn prob(&self, z: StateId) -> f64 {
        match self.entries.binary_search_by_key(&z, |e| e.0) {
            Ok(i) => self.entries[i].1,
            Err(_) => self.background,
        }
    }

    /// Number of successors carrying the background probability.
    pub fn background_count(&self) -> usize {
        self.n_states - self.entries.len()
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![self.background; self.n_states];
        for &(z, p) in &self.entries {
            out[z.index()] = p;
        }
        out
    }
}

#[inline]
fn smoothed(alpha: f64, count: u64, denom: f64) -> f64 {
    (alpha * count as f64 + 1.0) / denom
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountModel {
    n_states: usize,
    n_actions: usize,
    alpha: f64,
    rows: Vec<Vec<(StateId, u64)>>,
    row_totals: Vec<u64>,
    visits: Vec<u64>,
    total_visits: u64,
    predecessors: Vec<Vec<(StateId, usize)>>,
    terminal: Vec<bool>,
    touched: Vec<bool>,
    n_touched: usize,
    n_terminal: usize,
    log_visit_sum: f64,
}

impl CountModel {
    /// Zero-count model; `alpha` defaults to `100 · n_states`.
    pub fn new(n_states: usize, n_actions: usize, alpha: Option<f64>) -> Result<Self, ModelError> {
        if n_states == 0 || n_actions == 0 {
            return Err(ModelError::InvalidDimensions { n_states, n_actions });
        }
        let alpha = alpha.unwrap_or(100.0 * n_states as f64);
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(ModelError::InvalidAlpha(alpha));
        }
        Ok(CountModel {
            n_states,
            n_actions,
            alpha,
            rows: vec![Vec::new(); n_states * n_actions],
            row_totals: vec![0; n_states * n_actions],
            visits: vec![0; n_states],
            total_visits: 0,
            predecessors: vec![Vec::new(); n_states],
            terminal: vec![false; n_states],
            touched: vec![false; n_states],
            n_touched: 0,
            n_terminal: 0,
            log_visit_sum: 0.0,
        })
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_actions(&self) -> usize {
        self.n_actions
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn check_state(&self, z: StateId) -> Result<(), ModelError> {
        if z.index() < self.n_states {
            Ok(())
        } else {
            Err(ModelError::StateOutOfRange(z))
        }
    }

    fn check(&self, z: StateId, a: usize) -> Result<(), ModelError> {
        self.check_state(z)?;
        if a < self.n_actions {
            Ok(())
        } else {
            Err(ModelError::ActionOutOfRange(a))
        }
    }

    #[inline]
    fn row_index(&self, z: StateId, a: usize) -> usize {
        z.index() * self.n_actions + a
    }

    /// Counts one visit to `z` without a transition (episode starts).
    pub fn register_visit(&mut self, z: StateId) -> Result<(), ModelError> {
        self.check_state(z)?;
        let n = self.visits[z.index()];
        self.log_visit_sum += ((n + 2) as f64).ln() - ((n + 1) as f64).ln();
        self.visits[z.index()] = n + 1;
        self.total_visits += 1;
        Ok(())
    }

    /// Records the transition `(z, a, next)`: bumps its count and the visit
    /// count of `next`.
    pub fn observe(&mut self, z: StateId, a: usize, next: StateId) -> Result<(), ModelError> {
        self.check(z, a)?;
        self.check_state(next)?;
        let ri = self.row_index(z, a);
        let row = &mut self.rows[ri];
        match row.binary_search_by_key(&next, |e| e.0) {
            Ok(i) => row[i].1 += 1,
            Err(i) => {
                row.insert(i, (next, 1));
                let preds = &mut self.predecessors[next.index()];
                if let Err(j) = preds.binary_search(&(z, a)) {
                    preds.insert(j, (z, a));
                }
            }
        }
        self.row_totals[ri] += 1;
        if !self.touched[z.index()] {
            self.touched[z.index()] = true;
            self.n_touched += 1;
        }
        self.register_visit(next)
    }

    /// Flags `z` as absorbing: it contributes no future value.
    pub fn mark_terminal(&mut self, z: StateId) -> Result<(), ModelError> {
        self.check_state(z)?;
        if !self.terminal[z.index()] {
            self.terminal[z.index()] = true;
            self.n_terminal += 1;
        }
        Ok(())
    }

    pub fn is_terminal(&self, z: StateId) -> bool {
        self.terminal[z.index()]
    }

    /// True once any transition out of `z` has been recorded.
    pub fn is_touched(&self, z: StateId) -> bool {
        self.touched[z.index()]
    }

    pub fn n_touched(&self) -> usize {
        self.n_touched
    }

    pub fn n_terminal(&self) -> usize {
        self.n_terminal
    }

    pub fn count(&self, z: StateId, a: usize, next: StateId) -> u64 {
        let row = &self.rows[self.row_index(z, a)];
        row.binary_search_by_key(&next, |e| e.0).map(|i| row[i].1).unwrap_or(0)
    }

    /// Observed successors of `(z, a)` with their counts, sorted by state.
    pub fn row(&self, z: StateId, a: usize) -> &[(StateId, u64)] {
        &self.rows[self.row_index(z, a)]
    }

    /// `N(z, a)`.
    pub fn row_total(&self, z: StateId, a: usize) -> u64 {
        self.row_totals[self.row_index(z, a)]
    }

    /// Denominator of the predictive row, `α·N(z,a) + |Z|`.
    #[inline]
    pub fn row_denominator(&self, z: StateId, a: usize) -> f64 {
        self.alpha * self.row_total(z, a) as f64 + self.n_states as f64
    }

    pub fn visit_count(&self, z: StateId) -> u64 {
        self.visits[z.index()]
    }

    pub fn total_visits(&self) -> u64 {
        self.total_visits
    }

    /// `Σ_z ln(N(z) + 1)`, maintained incrementally.
    pub fn log_visit_sum(&self) -> f64 {
        self.log_visit_sum
    }

    /// Every `(z̄, ā)` with a recorded transition into `z`, sorted.
    pub fn predecessors(&self, z: StateId) -> &[(StateId, usize)] {
        &self.predecessors[z.index()]
    }

    pub fn predict_row(&self, z: StateId, a: usize) -> Result<SparseRow, ModelError> {
        self.check(z, a)?;
        Ok(self.predict_row_unchecked(z, a))
    }

    pub(crate) fn predict_row_unchecked(&self, z: StateId, a: usize) -> SparseRow {
        let denom = self.row_denominator(z, a);
        SparseRow {
            entries: self.row(z, a).iter().map(|&(s, c)| (s, smoothed(self.alpha, c, denom))).collect(),
            background: 1.0 / denom,
            n_states: self.n_states,
        }
    }

    /// Dense `p(· | z, a)`.
    pub fn predict(&self, z: StateId, a: usize) -> Result<Vec<f64>, ModelError> {
        Ok(self.predict_row(z, a)?.to_dense())
    }

    /// Predictive row after one extra, hypothetical observation of `(z, a, hyp)`.
    /// The model itself is untouched.
    pub fn predict_row_hypothetical(&self, z: StateId, a: usize, hyp: StateId) -> Result<SparseRow, ModelError> {
        self.check(z, a)?;
        self.check_state(hyp)?;
        let denom = self.alpha * (self.row_total(z, a) + 1) as f64 + self.n_states as f64;
        let mut entries: Vec<(StateId, f64)> = Vec::with_capacity(self.row(z, a).len() + 1);
        let mut placed = false;
        for &(s, c) in self.row(z, a) {
            if !placed && hyp < s {
                entries.push((hyp, smoothed(self.alpha, 1, denom)));
                placed = true;
            }
            let c = if s == hyp {
                placed = true;
                c + 1
            } else {
                c
            };
            entries.push((s, smoothed(self.alpha, c, denom)));
        }
        if !placed {
            entries.push((hyp, smoothed(self.alpha, 1, denom)));
        }
        Ok(SparseRow { entries, background: 1.0 / denom, n_states: self.n_states })
    }

    pub fn predict_hypothetical(&self, z: StateId, a: usize, hyp: StateId) -> Result<Vec<f64>, ModelError> {
        Ok(self.predict_row_hypothetical(z, a, hyp)?.to_dense())
    }

    /// `N(z) / Σ N`.
    pub fn state_visit_fraction(&self, z: StateId) -> Result<f64, ModelError> {
        self.check_state(z)?;
        if self.total_visits == 0 {
            return Err(ModelError::EmptyModel);
        }
        Ok(self.visits[z.index()] as f64 / self.total_visits as f64)
    }

    /// Writes the transition table as CSV `z,a,z_next,count`, rows in
    /// ascending `(z, a, z_next)` order.
    pub fn write_transitions_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for z in 0..self.n_states {
            for a in 0..self.n_actions {
                for &(next, count) in self.row(StateId::new(z), a) {
                    w.serialize(TransitionRecord { z: z as u32, a, z_next: next.0, count })?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Writes visit counts as CSV `z,visits,terminal` for every state with a
    /// visit or a terminal flag.
    pub fn write_visits_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for z in 0..self.n_states {
            if self.visits[z] > 0 || self.terminal[z] {
                w.serialize(VisitRecord { z: z as u32, visits: self.visits[z], terminal: self.terminal[z] })?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Rebuilds a model from the two tables written above.
    pub fn from_tables<R1: Read, R2: Read>(
        n_states: usize,
        n_actions: usize,
        alpha: Option<f64>,
        transitions: R1,
        visits: R2,
    ) -> Result<Self, ModelError> {
        let mut model = CountModel::new(n_states, n_actions, alpha)?;
        let table = |e: csv::Error| ModelError::Table(e.to_string());
        for rec in csv::Reader::from_reader(transitions).deserialize::<TransitionRecord>() {
            let rec = rec.map_err(table)?;
            let (z, next) = (StateId(rec.z), StateId(rec.z_next));
            model.check(z, rec.a)?;
            model.check_state(next)?;
            let ri = model.row_index(z, rec.a);
            let row = &mut model.rows[ri];
            match row.binary_search_by_key(&next, |e| e.0) {
                Ok(_) => return Err(ModelError::Table(format!("duplicate row ({}, {}, {})", z, rec.a, next))),
                Err(i) => row.insert(i, (next, rec.count)),
            }
            model.row_totals[ri] += rec.count;
            let preds = &mut model.predecessors[next.index()];
            if let Err(j) = preds.binary_search(&(z, rec.a)) {
                preds.insert(j, (z, rec.a));
            }
            if !model.touched[z.index()] {
                model.touched[z.index()] = true;
                model.n_touched += 1;
            }
        }
        for rec in csv::Reader::from_reader(visits).deserialize::<VisitRecord>() {
            let rec = rec.map_err(table)?;
            let z = StateId(rec.z);
            model.check_state(z)?;
            model.visits[z.index()] = rec.visits;
            model.total_visits += rec.visits;
            if rec.terminal {
                model.mark_terminal(z)?;
            }
        }
        model.log_visit_sum = model.visits.iter().map(|&n| ((n + 1) as f64).ln()).sum();
        Ok(model)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct TransitionRecord {
    z: u32,
    a: usize,
    z_next: u32,
    count: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct VisitRecord {
    z: u32,
    visits: u64,
    terminal: bool,
}
