//! Count model predictions, hypothetical updates and visit statistics.
//!
//! cargo run --example count_model

use explore_lab::{CountModel, StateId};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s = StateId::new;
    let mut m = CountModel::new(4, 2, Some(1.0))?;
    println!("prior row (0, a0): {:?}", m.predict(s(0), 0)?);

    m.observe(s(0), 0, s(1))?;
    m.observe(s(0), 0, s(1))?;
    m.observe(s(0), 0, s(2))?;
    println!("after 2×z1, 1×z2: {:?}", m.predict(s(0), 0)?);
    println!("if z3 came next:  {:?}", m.predict_hypothetical(s(0), 0, s(3))?);
    println!("row (0, a1) still untouched: {:?}", m.predict(s(0), 1)?);

    // the default update factor scales with the state space and sharpens quickly
    let mut sharp = CountModel::new(100, 1, None)?;
    sharp.observe(s(0), 0, s(5))?;
    println!("α = {}: p(z5 | z0) = {:.6} after one observation", sharp.alpha(), sharp.predict(s(0), 0)?[5]);

    for z in [1, 1, 2] {
        m.register_visit(s(z))?;
    }
    println!("visit fraction of z1: {}", m.state_visit_fraction(s(1))?);
    Ok(())
}
