//! Command line: `run`, `sweep`, `heatmap`, `oracle`.

use super::checks::{planner_gap, two_action_capacity};
use super::export::{export_heatmap, export_metrics, export_run_log, export_summary};
use super::heatmap::{heatmap, HeatMetric};
use super::metrics::{aggregate, all_specs, run_suite};
use super::run::{random_walk_model, train};
use super::{ConfigFile, HarnessError, RunConfig};
use crate::intrinsic::{RewardKind, RewardSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

/// Sweep threshold used by `oracle` unless `--theta` is given.
pub const ORACLE_THETA: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "explore-lab", version, about = "Intrinsically motivated exploration in gridworlds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one agent and write its step log.
    Run(CommonArgs),
    /// Run every reward kind over several seeds and write metric series.
    Sweep(CommonArgs),
    /// Train, then export per-cell motivation fields.
    Heatmap(HeatmapArgs),
    /// Cross-check the planner and Blahut–Arimoto against reference solvers.
    Oracle(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Config file (flat TOML); flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// playground, small, unary-<harmless|harmful>-<deterministic|stochastic>, or a layout file.
    #[arg(long)]
    pub env: Option<String>,
    /// novelty, infogain, empowerment, sum or product.
    #[arg(long)]
    pub reward: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub seeds: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Backups per environment step.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Sweep threshold.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Model update factor.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub w_ig: Option<f64>,
    #[arg(long)]
    pub w_emp: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrainPolicy {
    /// Greedy on the configured reward.
    Greedy,
    /// Uniformly random actions.
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct HeatmapArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, default_value_t = TrainPolicy::Greedy)]
    pub policy: TrainPolicy,
}

impl CommonArgs {
    /// Defaults, then the config file, then flags.
    pub fn resolve(&self) -> Result<RunConfig, HarnessError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            cfg.apply(&ConfigFile::load(path)?)?;
        }
        let flags = ConfigFile {
            env: self.env.clone(),
            reward: self.reward.clone(),
            w_ig: self.w_ig,
            w_emp: self.w_emp,
            steps: self.steps,
            seeds: self.seeds,
            seed: self.seed,
            budget: self.budget,
            theta: self.theta,
            alpha: self.alpha,
            out: self.out.clone(),
        };
        cfg.apply(&flags)?;
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

pub fn execute(command: &Command) -> Result<(), HarnessError> {
    match command {
        Command::Run(args) => cmd_run(&args.resolve()?),
        Command::Sweep(args) => cmd_sweep(&args.resolve()?),
        Command::Heatmap(args) => cmd_heatmap(&args.common.resolve()?, args.policy),
        Command::Oracle(args) => {
            let mut a = args.clone();
            a.env.get_or_insert_with(|| "small".into());
            a.steps.get_or_insert(2_000);
            // 1e-5 leaves up to θ/(1−γ) of slack, too coarse for the 1e-4 check
            a.theta.get_or_insert(ORACLE_THETA);
            cmd_oracle(&a.resolve()?)
        }
    }
}

fn cmd_run(cfg: &RunConfig) -> Result<(), HarnessError> {
    let seed = cfg.base_seed;
    let trained = train(cfg, seed)?;
    let log = &trained.log;
    let name = cfg.reward.kind.as_str();
    export_run_log(log, &cfg.out_dir.join(format!("run_{name}_seed{seed}.csv")))?;
    export_metrics(&aggregate(cfg.reward, std::slice::from_ref(log)), &cfg.out_dir.join(format!("metrics_{name}_seed{seed}.csv")))?;
    println!(
        "{name} seed {seed}: {} steps, discovered {}, deaths {}, ball hits {}, ratio {:.3}",
        log.records.len(),
        log.final_discovered(),
        log.final_deaths(),
        log.ball_hits,
        log.ratio()
    );
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig) -> Result<(), HarnessError> {
    let specs: Vec<RewardSpec> = all_specs()
        .into_iter()
        .map(|s| if s.kind == RewardKind::Sum { RewardSpec { kind: RewardKind::Sum, ..cfg.reward } } else { s })
        .collect();
    let all = run_suite(cfg, &specs)?;
    for s in &all {
        export_metrics(s, &cfg.out_dir.join(format!("metrics_{}.csv", s.reward.kind)))?;
    }
    export_summary(&all, &cfg.out_dir.join("summary.csv"))?;
    println!("{:<12} {:>12} {:>10} {:>14}", "reward", "discovered", "deaths", "ratio");
    for s in &all {
        println!(
            "{:<12} {:>6.1} ±{:<4.1} {:>5.1} ±{:<3.1} {:>7.2} ±{:<5.2}",
            s.reward.kind.as_str(),
            s.final_discovered_mean(),
            s.discovered_stderr.last().copied().unwrap_or(0.0),
            s.final_deaths_mean(),
            s.deaths_stderr.last().copied().unwrap_or(0.0),
            s.ratio_mean,
            s.ratio_stderr
        );
    }
    Ok(())
}

fn cmd_heatmap(cfg: &RunConfig, policy: TrainPolicy) -> Result<(), HarnessError> {
    let grid = cfg.env.load()?;
    let seed = cfg.base_seed;
    let model = match policy {
        TrainPolicy::Random => random_walk_model(&grid, cfg.total_steps, seed, cfg.alpha)?,
        TrainPolicy::Greedy => {
            let trained = train(cfg, seed)?;
            let q = trained.agent.planner().snapshot(trained.agent.model(), trained.agent.rewards());
            std::fs::create_dir_all(&cfg.out_dir)?;
            q.write_csv(BufWriter::new(File::create(cfg.out_dir.join("qtable.csv"))?))?;
            trained.agent.model().clone()
        }
    };
    for metric in HeatMetric::ALL {
        let field = heatmap(&model, &grid, metric)?;
        export_heatmap(&field, &cfg.out_dir, &format!("heatmap_{metric}"))?;
        let (lo, hi) = field.range().unwrap_or((0.0, 0.0));
        println!("{metric:<12} min {lo:.4} max {hi:.4}");
    }
    Ok(())
}

fn cmd_oracle(cfg: &RunConfig) -> Result<(), HarnessError> {
    let mut ok = true;
    let (value, omega) = two_action_capacity(1e-12, 100_000)?;
    let pass = (value - 1.25f64.ln()).abs() < 1e-5 && (omega[0] - 0.6).abs() < 1e-3;
    ok &= pass;
    println!(
        "blahut-arimoto  capacity {value:.6} (ln 5/4 = {:.6}) omega ({:.4}, {:.4})  {}",
        1.25f64.ln(),
        omega[0],
        omega[1],
        verdict(pass)
    );

    let grid = cfg.env.load()?;
    let model = random_walk_model(&grid, cfg.total_steps, cfg.base_seed, cfg.alpha)?;
    for spec in all_specs() {
        let spec = if spec.kind == RewardKind::Sum { RewardSpec { kind: RewardKind::Sum, ..cfg.reward } } else { spec };
        let gap = planner_gap(&model, spec, cfg.theta, 1e-10)?;
        let pass = gap <= 1e-4;
        ok &= pass;
        println!("sweep vs vi     {:<12} max |dQ| {gap:.3e}  {}", spec.kind.as_str(), verdict(pass));
    }
    if ok {
        Ok(())
    } else {
        Err(HarnessError::CheckFailed)
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "ok"
    } else {
        "FAIL"
    }
}
