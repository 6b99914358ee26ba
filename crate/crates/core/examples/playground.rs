//! Loads the mixed-tile playground, prints it, and walks a few steps.
//!
//! cargo run --example playground

use explore_lab::env::{builtin_playground, true_transitions};
use explore_lab::{Action, GridEnv, Pose, TileKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = builtin_playground();
    println!("{}", grid.to_layout_string());
    for kind in [TileKind::Floor, TileKind::Wall, TileKind::Lava, TileKind::Ice] {
        println!("{kind:?}: {}", grid.count(kind));
    }
    println!("start {:?}, |Z| = {}", grid.start(), grid.n_states());

    let mut env = GridEnv::new(grid.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for a in [Action::Forward, Action::TurnLeft, Action::Forward, Action::Forward] {
        let out = env.step(a, &mut rng)?;
        println!("{a:?} -> {:?} ({})", out.next, out.event.as_str());
    }

    // the slip law on an ice tile, read off the exact transition table
    let ice = grid.cells().find(|&c| grid.tile(c) == TileKind::Ice).expect("playground has ice");
    let z = grid.encode(Pose::new(ice.x, ice.y, explore_lab::Direction::North));
    let row = true_transitions(&grid, z, Action::Forward)?;
    for (i, p) in row.iter().enumerate().filter(|(_, &p)| p > 0.0) {
        let pose = grid.decode(explore_lab::StateId::new(i)).unwrap();
        println!("forward on ice at {ice:?}: {:?} with p = {p:.3}", pose.cell());
    }
    Ok(())
}
