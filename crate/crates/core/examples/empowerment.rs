//! Channel capacity with Blahut-Arimoto, on hand-made channels and on a
//! model learned by a random walk.
//!
//! cargo run --release --example empowerment

use explore_lab::env::builtin_playground;
use explore_lab::harness::random_walk_model;
use explore_lab::intrinsic::{channel_at, empowerment_ba, empowerment_uniform, Channel, DEFAULT_MAX_ITERS, DEFAULT_TOL};
use explore_lab::{Direction, Pose, TileKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let two = Channel::new(vec![vec![1.0, 0.0], vec![0.5, 0.5]])?;
    let r = empowerment_ba(&two, 1e-12, 100_000)?;
    println!("a0 fixed, a1 a coin: C = {:.6} (ln 5/4 = {:.6}), ω* = {:?}", r.value, 1.25f64.ln(), r.omega);
    println!("uniform policy only reaches {:.6}", empowerment_uniform(&two));

    let grid = builtin_playground();
    let model = random_walk_model(&grid, 20_000, 0, None)?;
    for kind in [TileKind::Floor, TileKind::Ice, TileKind::Lava] {
        let cell = grid.cells().filter(|&c| grid.tile(c) == kind).max_by_key(|&c| {
            model.visit_count(grid.encode(Pose::new(c.x, c.y, Direction::North)))
        });
        let Some(cell) = cell else { continue };
        let z = grid.encode(Pose::new(cell.x, cell.y, Direction::North));
        let e = empowerment_ba(&channel_at(&model, z)?, DEFAULT_TOL, DEFAULT_MAX_ITERS)?;
        println!("{kind:?} at {cell:?} facing north: {:.4} nats (ln 3 = {:.4})", e.value, 3f64.ln());
    }
    Ok(())
}
