//! Prioritized sweeping on a frozen model against value iteration.
//!
//! cargo run --release --example prioritized_sweeping

use explore_lab::env::builtin_small;
use explore_lab::harness::{all_specs, random_walk_model};
use explore_lab::intrinsic::IntrinsicRewards;
use explore_lab::planner::{discount_for, value_iteration_oracle};
use explore_lab::Planner;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = builtin_small();
    let model = random_walk_model(&grid, 2000, 0, None)?;
    let gamma = discount_for(model.n_states())?;
    println!("|Z| = {}, γ = {gamma:.6}", model.n_states());
    for spec in all_specs() {
        let rewards = IntrinsicRewards::new(spec, &model)?;
        let vi = value_iteration_oracle(&model, &rewards, gamma, 1e-11)?;
        for theta in [1e-5, 1e-6] {
            let mut p = Planner::new(model.n_states(), model.n_actions(), gamma, theta)?;
            let backups = p.sweep_to_quiescence(&model, &rewards);
            let gap = p.snapshot(&model, &rewards).max_abs_diff(&vi);
            println!("{:<12} θ={theta:.0e}: {backups:>7} backups, sup gap {gap:.2e}", spec.kind.to_string());
        }
    }
    Ok(())
}
