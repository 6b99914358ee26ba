//! Seed aggregation for the exploration comparison.

use super::run::{run_single, RunLog};
use super::{HarnessError, RunConfig};
use crate::intrinsic::{RewardKind, RewardSpec};
use rayon::prelude::*;

/// Per-step means and standard errors across seeds, plus final ratios.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSeries {
    pub reward: RewardSpec,
    pub seeds: Vec<u64>,
    pub discovered_mean: Vec<f64>,
    pub discovered_stderr: Vec<f64>,
    pub deaths_mean: Vec<f64>,
    pub deaths_stderr: Vec<f64>,
    pub final_discovered: Vec<usize>,
    pub final_deaths: Vec<usize>,
    /// Per seed, `discovered / max(1, deaths)`.
    pub ratios: Vec<f64>,
    pub ratio_mean: f64,
    pub ratio_stderr: f64,
}

impl MetricSeries {
    pub fn steps(&self) -> usize {
        self.discovered_mean.len()
    }

    pub fn final_discovered_mean(&self) -> f64 {
        self.discovered_mean.last().copied().unwrap_or(0.0)
    }

    pub fn final_deaths_mean(&self) -> f64 {
        self.deaths_mean.last().copied().unwrap_or(0.0)
    }
}

/// Sample mean and standard error of the mean; the error is 0 for one sample.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

/// Aggregates runs of one reward spec. All logs must have the same length.
pub fn aggregate(reward: RewardSpec, logs: &[RunLog]) -> MetricSeries {
    assert!(!logs.is_empty(), "nothing to aggregate");
    let steps = logs[0].discovered.len();
    assert!(logs.iter().all(|l| l.discovered.len() == steps), "runs differ in length");
    let column = |pick: &dyn Fn(&RunLog) -> &Vec<usize>, t: usize| -> (f64, f64) {
        let xs: Vec<f64> = logs.iter().map(|l| pick(l)[t] as f64).collect();
        mean_stderr(&xs)
    };
    let (mut dm, mut ds, mut km, mut ks) = (vec![], vec![], vec![], vec![]);
    for t in 0..steps {
        let (m, s) = column(&|l| &l.discovered, t);
        dm.push(m);
        ds.push(s);
        let (m, s) = column(&|l| &l.deaths, t);
        km.push(m);
        ks.push(s);
    }
    let ratios: Vec<f64> = logs.iter().map(RunLog::ratio).collect();
    let (ratio_mean, ratio_stderr) = mean_stderr(&ratios);
    MetricSeries {
        reward,
        seeds: logs.iter().map(|l| l.seed).collect(),
        discovered_mean: dm,
        discovered_stderr: ds,
        deaths_mean: km,
        deaths_stderr: ks,
        final_discovered: logs.iter().map(RunLog::final_discovered).collect(),
        final_deaths: logs.iter().map(RunLog::final_deaths).collect(),
        ratios,
        ratio_mean,
        ratio_stderr,
    }
}

/// The five reward specs with unit weights.
pub fn all_specs() -> Vec<RewardSpec> {
    RewardKind::ALL.iter().map(|&k| RewardSpec::new(k)).collect()
}

/// Runs every seed of `config` for each spec in `specs`, in parallel, and
/// aggregates per spec. The result does not depend on the thread count.
pub fn run_suite(config: &RunConfig, specs: &[RewardSpec]) -> Result<Vec<MetricSeries>, HarnessError> {
    config.validate()?;
    let seeds = config.seeds();
    let jobs: Vec<(usize, u64)> = (0..specs.len()).flat_map(|i| seeds.iter().map(move |&s| (i, s))).collect();
    let logs: Vec<RunLog> = jobs
        .par_iter()
        .map(|&(i, seed)| {
            let cfg = RunConfig { reward: specs[i], ..config.clone() };
            run_single(&cfg, seed)
        })
        .collect::<Result<_, _>>()?;
    Ok(specs
        .iter()
        .enumerate()
        .map(|(i, &spec)| aggregate(spec, &logs[i * seeds.len()..(i + 1) * seeds.len()]))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::EnvSpec;

    #[test]
    fn mean_and_stderr() {
        assert_eq!(mean_stderr(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_stderr(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (1.666_666_666_666_666_7f64 / 4.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn single_seed_has_zero_stderr() {
        let cfg = RunConfig { env: EnvSpec::Small, total_steps: 40, n_seeds: 1, ..RunConfig::default() };
        let series = run_suite(&cfg, &[RewardSpec::new(RewardKind::Novelty)]).unwrap();
        assert_eq!(series.len(), 1);
        assert!(series[0].discovered_stderr.iter().all(|&s| s == 0.0));
        assert!(series[0].deaths_stderr.iter().all(|&s| s == 0.0));
        assert_eq!(series[0].ratio_stderr, 0.0);
        assert_eq!(series[0].steps(), 40);
    }

    #[test]
    fn parallel_matches_sequential() {
        let cfg = RunConfig { env: EnvSpec::Small, total_steps: 60, n_seeds: 3, base_seed: 4, ..RunConfig::default() };
        let specs = all_specs();
        let par = run_suite(&cfg, &specs).unwrap();
        for (i, spec) in specs.iter().enumerate() {
            let logs: Vec<RunLog> = cfg
                .seeds()
                .iter()
                .map(|&s| run_single(&RunConfig { reward: *spec, ..cfg.clone() }, s).unwrap())
                .collect();
            assert_eq!(aggregate(*spec, &logs), par[i]);
        }
    }

    #[test]
    fn ratio_uses_at_least_one_death() {
        let cfg = RunConfig { env: EnvSpec::Small, total_steps: 30, n_seeds: 1, ..RunConfig::default() };
        let log = run_single(&cfg, 0).unwrap();
        let expected = log.final_discovered() as f64 / log.final_deaths().max(1) as f64;
        assert_eq!(log.ratio(), expected);
    }
}
