//! Each agent in the four single-feature worlds: harmless or harmful,
//! deterministic or stochastic.
//!
//! cargo run --release --example unary_worlds

use explore_lab::env::UnaryVariant;
use explore_lab::harness::{run_single, EnvSpec, RunConfig};
use explore_lab::{RewardKind, RewardSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for harmful in [false, true] {
        for stochastic in [false, true] {
            let variant = UnaryVariant { harmful, stochastic };
            println!("{}", variant.name());
            for kind in RewardKind::ALL {
                let cfg = RunConfig {
                    env: EnvSpec::Unary(variant),
                    reward: RewardSpec::new(kind),
                    total_steps: 2000,
                    ..RunConfig::default()
                };
                let log = run_single(&cfg, 0)?;
                println!(
                    "  {:<12} discovered {:>3}  deaths {:>3}  ball hits {:>3}  goals {:>3}",
                    kind.to_string(),
                    log.final_discovered(),
                    log.final_deaths(),
                    log.ball_hits,
                    log.goals
                );
            }
        }
    }
    Ok(())
}
