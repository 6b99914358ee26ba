use rand::Rng;

/// Index of the largest entry; exact ties are broken uniformly with `rng`.
pub fn greedy_action<R: Rng + ?Sized>(row: &[f64], rng: &mut R) -> usize {
    assert!(!row.is_empty(), "no actions to choose from");
    let best = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ties = row.iter().filter(|&&v| v == best).count();
    if ties <= 1 {
        return row.iter().position(|&v| v == best).unwrap_or(0);
    }
    let pick = rng.gen_range(0..ties);
    row.iter().enumerate().filter(|(_, &v)| v == best).nth(pick).map(|(i, _)| i).unwrap()
}
