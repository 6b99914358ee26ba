//! Heatmaps of every metric after a random walk, written as CSV and PPM.
//!
//! cargo run --release --example heatmaps -- [out_dir]

use explore_lab::env::builtin_playground;
use explore_lab::harness::export::export_heatmap;
use explore_lab::harness::{heatmap, random_walk_model, HeatMetric};
use explore_lab::TileKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::path::PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "out/heatmaps".into()));
    std::fs::create_dir_all(&out)?;
    let grid = builtin_playground();
    let model = random_walk_model(&grid, 100_000, 0, None)?;
    for metric in HeatMetric::ALL {
        let field = heatmap(&model, &grid, metric)?;
        export_heatmap(&field, &out, &format!("heatmap_{}", metric.as_str()))?;
        let mean = |k: TileKind| field.mean_over(grid.cells().filter(|&c| grid.tile(c) == k));
        println!(
            "{:<12} floor {:.4}  ice {:.4}  lava {:.4}  peak {:?}",
            metric.as_str(),
            mean(TileKind::Floor).unwrap_or(f64::NAN),
            mean(TileKind::Ice).unwrap_or(f64::NAN),
            mean(TileKind::Lava).unwrap_or(f64::NAN),
            field.argmax()
        );
    }
    println!("wrote {}", out.display());
    Ok(())
}
