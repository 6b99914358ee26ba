//! The five agents on the playground, several seeds each, with a summary
//! table. Slow in debug builds.
//!
//! cargo run --release --example simulation -- [steps] [seeds]

use explore_lab::harness::{all_specs, run_suite, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let steps = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3000);
    let seeds = args.next().map(|s| s.parse()).transpose()?.unwrap_or(3);
    let cfg = RunConfig { total_steps: steps, n_seeds: seeds, ..RunConfig::default() };
    let series = run_suite(&cfg, &all_specs())?;
    println!("{steps} steps, seeds {:?}", cfg.seeds());
    println!("{:<12} {:>10} {:>8} {:>8}", "reward", "discovered", "deaths", "ratio");
    for s in &series {
        println!(
            "{:<12} {:>10.1} {:>8.1} {:>8.2}",
            s.reward.kind.to_string(),
            s.final_discovered_mean(),
            s.final_deaths_mean(),
            s.ratio_mean
        );
    }
    Ok(())
}
