//! Information gain shrinks as a transition is repeated, and stays high
//! where the world is noisy.
//!
//! cargo run --release --example info_gain

use explore_lab::intrinsic::info_gain_predicted;
use explore_lab::{CountModel, StateId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = StateId::new;
    let mut det = CountModel::new(64, 1, None)?;
    let mut noisy = CountModel::new(64, 1, None)?;
    let mut done = 0;
    for checkpoint in [0, 1, 10, 100, 1_000, 10_000] {
        while done < checkpoint {
            det.observe(s(0), 0, s(1))?;
            noisy.observe(s(0), 0, s(1 + done % 4))?;
            done += 1;
        }
        println!(
            "{checkpoint:>6} repeats: deterministic {:.3e}, four-way slip {:.3e}",
            info_gain_predicted(&det, s(0), 0)?,
            info_gain_predicted(&noisy, s(0), 0)?
        );
    }
    Ok(())
}
