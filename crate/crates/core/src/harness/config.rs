//! Run configuration and the config file.
//!
//! The file is flat TOML, one `key = value` per line:
//!
//! ```toml
//! env = "playground"      # playground | small | unary-<harm>-<dyn> | path to a layout file
//! reward = "sum"          # novelty | infogain | empowerment | sum | product
//! w_ig = 1.0              # sum weights
//! w_emp = 1.0
//! steps = 10000
//! seeds = 5
//! seed = 0                # base seed; seed i of a suite uses seed + i
//! budget = 1024           # backups per environment step, default |Z|
//! theta = 1e-5            # sweep threshold
//! alpha = 102400.0        # model update factor, default 100·|Z|
//! out = "out"
//! ```
//!
//! Unknown keys are rejected. Command-line flags override the file.

use super::HarnessError;
use crate::env::{builtin_playground, builtin_small, builtin_unary, load_layout, Grid, UnaryVariant};
use crate::intrinsic::{RewardKind, RewardSpec};
use crate::planner::DEFAULT_THETA;
use serde::Deserialize;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

/// Which world to build.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvSpec {
    Playground,
    Small,
    Unary(UnaryVariant),
    Layout(PathBuf),
}

impl EnvSpec {
    pub fn load(&self) -> Result<Grid, HarnessError> {
        Ok(match self {
            EnvSpec::Playground => builtin_playground(),
            EnvSpec::Small => builtin_small(),
            EnvSpec::Unary(v) => builtin_unary(*v),
            EnvSpec::Layout(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| HarnessError::Config(format!("cannot read layout {}: {e}", path.display())))?;
                load_layout(&text)?
            }
        })
    }
}

impl fmt::Display for EnvSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvSpec::Playground => f.write_str("playground"),
            EnvSpec::Small => f.write_str("small"),
            EnvSpec::Unary(v) => f.write_str(v.name()),
            EnvSpec::Layout(p) => write!(f, "{}", p.display()),
        }
    }
}

impl FromStr for EnvSpec {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(HarnessError::Config("empty environment name".into()));
        }
        Ok(match s {
            "playground" => EnvSpec::Playground,
            "small" => EnvSpec::Small,
            _ => {
                let unary = [false, true]
                    .into_iter()
                    .flat_map(|h| [false, true].into_iter().map(move |st| UnaryVariant { harmful: h, stochastic: st }))
                    .find(|v| v.name() == s);
                match unary {
                    Some(v) => EnvSpec::Unary(v),
                    None => EnvSpec::Layout(PathBuf::from(s)),
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub env: EnvSpec,
    pub reward: RewardSpec,
    pub total_steps: usize,
    pub n_seeds: usize,
    pub base_seed: u64,
    /// Backups per environment step; `None` means |Z|.
    pub budget: Option<usize>,
    pub theta: f64,
    /// Model update factor; `None` means 100·|Z|.
    pub alpha: Option<f64>,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            env: EnvSpec::Playground,
            reward: RewardSpec::new(RewardKind::Novelty),
            total_steps: 10_000,
            n_seeds: 5,
            base_seed: 0,
            budget: None,
            theta: DEFAULT_THETA,
            alpha: None,
            out_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.total_steps == 0 {
            return Err(HarnessError::Config("steps must be at least 1".into()));
        }
        if self.n_seeds == 0 {
            return Err(HarnessError::Config("seeds must be at least 1".into()));
        }
        if self.budget == Some(0) {
            return Err(HarnessError::Config("budget must be at least 1".into()));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(HarnessError::Config(format!("theta must be positive, got {}", self.theta)));
        }
        self.reward.validated()?;
        Ok(())
    }

    /// Seeds used by a suite: `base_seed, base_seed + 1, …`.
    pub fn seeds(&self) -> Vec<u64> {
        (0..self.n_seeds as u64).map(|i| self.base_seed.wrapping_add(i)).collect()
    }

    /// Applies every key present in `file`.
    pub fn apply(&mut self, file: &ConfigFile) -> Result<(), HarnessError> {
        if let Some(env) = &file.env {
            self.env = env.parse()?;
        }
        if let Some(r) = &file.reward {
            self.reward.kind = r.parse()?;
        }
        if let Some(w) = file.w_ig {
            self.reward.w_ig = w;
        }
        if let Some(w) = file.w_emp {
            self.reward.w_emp = w;
        }
        if let Some(n) = file.steps {
            self.total_steps = n;
        }
        if let Some(n) = file.seeds {
            self.n_seeds = n;
        }
        if let Some(s) = file.seed {
            self.base_seed = s;
        }
        if let Some(b) = file.budget {
            self.budget = Some(b);
        }
        if let Some(t) = file.theta {
            self.theta = t;
        }
        if let Some(a) = file.alpha {
            self.alpha = Some(a);
        }
        if let Some(o) = &file.out {
            self.out_dir = o.clone();
        }
        Ok(())
    }

    /// Defaults overridden by the file at `path`.
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let mut cfg = RunConfig::default();
        cfg.apply(&ConfigFile::load(path)?)?;
        Ok(cfg)
    }
}

/// Parsed config file; every key optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub env: Option<String>,
    pub reward: Option<String>,
    pub w_ig: Option<f64>,
    pub w_emp: Option<f64>,
    pub steps: Option<usize>,
    pub seeds: Option<usize>,
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub theta: Option<f64>,
    pub alpha: Option<f64>,
    pub out: Option<PathBuf>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read config {}: {e}", path.display())))?;
        ConfigFile::parse(&text)
    }
}
