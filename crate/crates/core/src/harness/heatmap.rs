//! Per-cell snapshots of the motivation measures under a learned model.

use super::HarnessError;
use crate::env::{Action, Cell, Direction, Grid, Pose, TileKind};
use crate::intrinsic::{
    anticipated_novelty, channel_at, empowerment_ba, info_gain_predicted, DEFAULT_MAX_ITERS, DEFAULT_TOL,
};
use crate::model::{CountModel, ModelError};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeatMetric {
    Novelty,
    InfoGain,
    Empowerment,
    Sum,
}

impl HeatMetric {
    pub const ALL: [HeatMetric; 4] = [HeatMetric::Novelty, HeatMetric::InfoGain, HeatMetric::Empowerment, HeatMetric::Sum];

    pub fn as_str(self) -> &'static str {
        match self {
            HeatMetric::Novelty => "novelty",
            HeatMetric::InfoGain => "infogain",
            HeatMetric::Empowerment => "empowerment",
            HeatMetric::Sum => "sum",
        }
    }
}

impl fmt::Display for HeatMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HeatMetric {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        HeatMetric::ALL
            .into_iter()
            .find(|m| m.as_str() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| HarnessError::Config(format!("unknown heatmap metric {s:?}")))
    }
}

/// A `width × height` field; walls hold `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeatField {
    pub metric: HeatMetric,
    pub width: usize,
    pub height: usize,
    pub values: Vec<Option<f64>>,
}

impl HeatField {
    pub fn get(&self, x: usize, y: usize) -> Option<f64> {
        self.values[y * self.width + x]
    }

    /// Mean over the given cells, skipping walls. `None` if nothing is left.
    pub fn mean_over<I: IntoIterator<Item = Cell>>(&self, cells: I) -> Option<f64> {
        let vals: Vec<f64> = cells.into_iter().filter_map(|c| self.get(c.x, c.y)).collect();
        if vals.is_empty() {
            None
        } else {
            Some(vals.iter().sum::<f64>() / vals.len() as f64)
        }
    }

    /// Cell holding the largest value; the first in row-major order on ties.
    pub fn argmax(&self) -> Option<Cell> {
        let mut best: Option<(usize, f64)> = None;
        for (i, v) in self.values.iter().enumerate() {
            if let Some(v) = *v {
                if best.map_or(true, |(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
        }
        best.map(|(i, _)| Cell::new(i % self.width, i / self.width))
    }

    /// Smallest and largest non-wall values.
    pub fn range(&self) -> Option<(f64, f64)> {
        let mut it = self.values.iter().flatten();
        let first = *it.next()?;
        Some(it.fold((first, first), |(lo, hi), &v| (lo.min(v), hi.max(v))))
    }
}

/// Computes `metric` for every occupiable cell, averaged over the four
/// headings (and over actions for information gain). Novelty is the value
/// the agent would receive on entering the pose now, which is finite for
/// unvisited poses. Poses the model knows to be terminal contribute zero
/// to the other metrics.
pub fn heatmap(model: &CountModel, grid: &Grid, metric: HeatMetric) -> Result<HeatField, HarnessError> {
    if model.total_visits() == 0 {
        return Err(ModelError::EmptyModel.into());
    }
    if model.n_states() != grid.n_states() {
        return Err(HarnessError::Config(format!(
            "model has {} states but the grid has {}",
            model.n_states(),
            grid.n_states()
        )));
    }
    let mut values = Vec::with_capacity(grid.width() * grid.height());
    for cell in grid.cells() {
        if grid.tile(cell) == TileKind::Wall {
            values.push(None);
            continue;
        }
        let mut acc = 0.0;
        for dir in Direction::ALL {
            let z = grid.encode(Pose::new(cell.x, cell.y, dir));
            let ig = || -> Result<f64, HarnessError> {
                let mut s = 0.0;
                for a in 0..Action::COUNT {
                    s += info_gain_predicted(model, z, a)?;
                }
                Ok(s / Action::COUNT as f64)
            };
            let emp = || -> Result<f64, HarnessError> {
                Ok(empowerment_ba(&channel_at(model, z)?, DEFAULT_TOL, DEFAULT_MAX_ITERS)?.value)
            };
            acc += match metric {
                HeatMetric::Novelty => anticipated_novelty(model, z),
                // nothing is ever done from an absorbing pose
                _ if model.is_terminal(z) => 0.0,
                HeatMetric::InfoGain => ig()?,
                HeatMetric::Empowerment => emp()?,
                HeatMetric::Sum => ig()? + emp()?,
            };
        }
        values.push(Some(acc / 4.0));
    }
    Ok(HeatField { metric, width: grid.width(), height: grid.height(), values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::builtin_playground;
    use crate::harness::random_walk_model;

    #[test]
    fn fresh_empowerment_is_flat_zero() {
        let grid = builtin_playground();
        let mut m = CountModel::new(grid.n_states(), 3, None).unwrap();
        m.register_visit(grid.encode(grid.start())).unwrap();
        let f = heatmap(&m, &grid, HeatMetric::Empowerment).unwrap();
        assert_eq!((f.width, f.height), (16, 16));
        for c in grid.cells() {
            match grid.tile(c) {
                TileKind::Wall => assert_eq!(f.get(c.x, c.y), None),
                _ => assert_eq!(f.get(c.x, c.y), Some(0.0)),
            }
        }
    }

    #[test]
    fn empty_model_is_rejected() {
        let grid = builtin_playground();
        let m = CountModel::new(grid.n_states(), 3, None).unwrap();
        assert!(heatmap(&m, &grid, HeatMetric::Novelty).is_err());
    }

    #[test]
    fn sum_is_info_gain_plus_empowerment() {
        let grid = crate::env::builtin_small();
        let m = random_walk_model(&grid, 500, 2, None).unwrap();
        let ig = heatmap(&m, &grid, HeatMetric::InfoGain).unwrap();
        let emp = heatmap(&m, &grid, HeatMetric::Empowerment).unwrap();
        let sum = heatmap(&m, &grid, HeatMetric::Sum).unwrap();
        for i in 0..sum.values.len() {
            match (ig.values[i], emp.values[i], sum.values[i]) {
                (Some(a), Some(b), Some(c)) => assert!((a + b - c).abs() < 1e-12),
                (None, None, None) => {}
                other => panic!("mismatched walls {other:?}"),
            }
        }
        assert!(heatmap(&m, &grid, HeatMetric::Novelty).unwrap().range().unwrap().0 >= 0.0);
    }
}
