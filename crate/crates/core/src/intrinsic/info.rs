//! Novelty and information gain over the count model. Natural logarithms
//! throughout.

use super::IntrinsicError;
use crate::env::StateId;
use crate::model::CountModel;

/// `KL(p || q) = Σ p ln(p / q)` with `0 ln 0 = 0`.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, IntrinsicError> {
    if p.len() != q.len() {
        return Err(IntrinsicError::LengthMismatch(p.len(), q.len()));
    }
    let mut acc = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(IntrinsicError::NotAbsolutelyContinuous(i));
            }
            acc += pi * (pi / qi).ln();
        }
    }
    Ok(acc)
}

/// Shannon entropy in nats.
pub fn entropy(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
}

/// State surprise `−ln(N(z') / Σ N)`, read after the transition into `z'`
/// has been recorded.
pub fn novelty(model: &CountModel, next: StateId) -> Result<f64, IntrinsicError> {
    let frac = model.state_visit_fraction(next)?;
    if frac == 0.0 {
        return Err(IntrinsicError::Unvisited(next));
    }
    Ok(-frac.ln())
}

/// Novelty the agent would receive if it entered `next` now:
/// `−ln((N(z') + 1) / (Σ N + 1))`. Finite for unvisited states.
pub fn anticipated_novelty(model: &CountModel, next: StateId) -> f64 {
    let t = (model.total_visits() + 1) as f64;
    t.ln() - ((model.visit_count(next) + 1) as f64).ln()
}

/// Expected KL between the predictive row after a hypothetical extra
/// observation and the current row, with the hypothetical successor drawn
/// from the current row.
///
/// Unobserved successors are exchangeable under the smoothed prior, so they
/// share one term weighted by their total mass.
pub fn info_gain_predicted(model: &CountModel, z: StateId, a: usize) -> Result<f64, IntrinsicError> {
    model.predict_row(z, a)?;
    let (alpha, n_states, n) = (model.alpha(), model.n_states() as f64, model.row_total(z, a));
    let denom = alpha * n as f64 + n_states;
    let mut total = 0.0;
    for &(_, c) in model.row(z, a) {
        total += (alpha * c as f64 + 1.0) / denom * kl_after_one(alpha, n_states, n, c);
    }
    let unseen = model.n_states() - model.row(z, a).len();
    total += unseen as f64 / denom * kl_after_one(alpha, n_states, n, 0);
    Ok(total)
}

/// KL of the row after the observed transition `(z, a, z')` against the row
/// before it. `model_before` must not yet contain the transition.
pub fn info_gain_retrospective(
    model_before: &CountModel,
    z: StateId,
    a: usize,
    next: StateId,
) -> Result<f64, IntrinsicError> {
    model_before.predict_row_hypothetical(z, a, next)?;
    let n = model_before.row_total(z, a);
    let c = model_before.count(z, a, next);
    Ok(kl_after_one(model_before.alpha(), model_before.n_states() as f64, n, c))
}

// (1 + d) ln(1 + d) − d, with a series near 0 where the direct form cancels
fn phi(d: f64) -> f64 {
    if d.abs() < 1e-2 {
        // Σ_{k≥2} (−d)^k / (k(k−1))
        let mut acc = 0.0;
        let mut pow = d * d;
        for k in 2..10 {
            acc += pow / (k * (k - 1)) as f64;
            pow *= -d;
        }
        acc
    } else {
        (1.0 + d) * d.ln_1p() - d
    }
}

/// KL(post || prior) for one extra observation of a successor already seen
/// `c` times in a row of total `n`.
///
/// Every posterior entry is its prior times `1 + d`, with one `d` for the
/// observed successor and another shared by all the rest, so the divergence
/// is `Σ prior·φ(d)` over two groups. Exact up to rounding of the inputs,
/// which keeps tiny gains monotone in the counts.
fn kl_after_one(alpha: f64, n_states: f64, n: u64, c: u64) -> f64 {
    let denom = alpha * n as f64 + n_states;
    let next_denom = denom + alpha;
    let hit = alpha * c as f64 + 1.0;
    let rest = alpha * (n - c) as f64 + n_states - 1.0;
    let d_hit = alpha * rest / (hit * next_denom);
    let d_rest = -alpha / next_denom;
    (hit * phi(d_hit) + rest * phi(d_rest)) / denom
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(i: usize) -> StateId {
        StateId::new(i)
    }

    /// Brute-force expectation over every hypothetical successor, dense.
    fn info_gain_dense(model: &CountModel, z: StateId, a: usize) -> f64 {
        let prior = model.predict(z, a).unwrap();
        (0..model.n_states())
            .map(|h| {
                let post = model.predict_hypothetical(z, a, s(h)).unwrap();
                prior[h] * kl_divergence(&post, &prior).unwrap()
            })
            .sum()
    }

    #[test]
    fn kl_basics() {
        let p = [0.2, 0.3, 0.5];
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let v = kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap();
        assert!((v - 2f64.ln()).abs() < 1e-15);
        // (2/3) ln(4/3) + (1/3) ln(2/3)
        let v = kl_divergence(&[2.0 / 3.0, 1.0 / 3.0], &[0.5, 0.5]).unwrap();
        assert!((v - 0.056_633_012_265_132_9).abs() < 1e-12);
        assert_eq!(kl_divergence(&[1.0], &[0.5, 0.5]), Err(IntrinsicError::LengthMismatch(1, 2)));
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]), Err(IntrinsicError::NotAbsolutelyContinuous(1)));
    }

    #[test]
    fn novelty_values() {
        let mut m = CountModel::new(10, 1, None).unwrap();
        assert!(matches!(novelty(&m, s(0)), Err(IntrinsicError::Model(_))));
        m.register_visit(s(0)).unwrap();
        assert_eq!(novelty(&m, s(0)).unwrap(), 0.0);
        assert_eq!(novelty(&m, s(1)), Err(IntrinsicError::Unvisited(s(1))));

        let mut m = CountModel::new(10, 1, None).unwrap();
        m.register_visit(s(1)).unwrap();
        for _ in 0..9 {
            m.register_visit(s(2)).unwrap();
        }
        assert!((novelty(&m, s(1)).unwrap() - 10f64.ln()).abs() < 1e-12);

        let mut m = CountModel::new(10, 1, None).unwrap();
        for _ in 0..2 {
            m.register_visit(s(1)).unwrap();
        }
        for _ in 0..6 {
            m.register_visit(s(2)).unwrap();
        }
        assert!((novelty(&m, s(1)).unwrap() - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn anticipated_novelty_matches_post_update_novelty() {
        let mut m = CountModel::new(6, 1, None).unwrap();
        m.register_visit(s(0)).unwrap();
        m.observe(s(0), 0, s(2)).unwrap();
        let before = anticipated_novelty(&m, s(3));
        m.observe(s(2), 0, s(3)).unwrap();
        assert!((novelty(&m, s(3)).unwrap() - before).abs() < 1e-12);
    }

    #[test]
    fn two_state_info_gain() {
        let m = CountModel::new(2, 1, Some(1.0)).unwrap();
        let expected = 0.056_633_012_265_132_9;
        assert!((info_gain_dense(&m, s(0), 0) - expected).abs() < 1e-12);
        assert!((info_gain_predicted(&m, s(0), 0).unwrap() - expected).abs() < 1e-12);
        assert!((info_gain_retrospective(&m, s(0), 0, s(0)).unwrap() - expected).abs() < 1e-12);
        assert!((info_gain_retrospective(&m, s(0), 0, s(1)).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn deterministic_repetition_drives_info_gain_down() {
        let mut m = CountModel::new(2, 1, Some(1.0)).unwrap();
        for _ in 0..1_000 {
            m.observe(s(0), 0, s(1)).unwrap();
        }
        let early = info_gain_predicted(&m, s(0), 0).unwrap();
        // jump the count without a million calls
        let table = "z,a,z_next,count\n0,0,1,1000000\n";
        let big2 = CountModel::from_tables(2, 1, Some(1.0), table.as_bytes(), "z,visits,terminal\n".as_bytes()).unwrap();
        let late = info_gain_predicted(&big2, s(0), 0).unwrap();
        assert!(late < early);
        assert!(late < 1e-5, "{late}");
        assert!(info_gain_retrospective(&big2, s(0), 0, s(1)).unwrap() < 1e-5);
    }

    #[test]
    fn representative_matches_dense_on_larger_rows() {
        let mut m = CountModel::new(12, 2, Some(5.0)).unwrap();
        for (z, a, n) in [(0, 0, 3), (0, 0, 3), (0, 0, 7), (0, 1, 11), (3, 1, 0)] {
            m.observe(s(z), a, s(n)).unwrap();
        }
        for z in 0..12 {
            for a in 0..2 {
                let fast = info_gain_predicted(&m, s(z), a).unwrap();
                let slow = info_gain_dense(&m, s(z), a);
                assert!((fast - slow).abs() < 1e-12, "{z} {a}: {fast} vs {slow}");
            }
        }
    }

    proptest! {
        #[test]
        fn sparse_info_gain_equals_brute_force(
            obs in prop::collection::vec((0usize..9, 0usize..9), 0..40),
            alpha in 0.1f64..500.0,
            z in 0usize..9,
        ) {
            let mut m = CountModel::new(9, 1, Some(alpha)).unwrap();
            for &(a, b) in &obs {
                m.observe(s(a), 0, s(b)).unwrap();
            }
            let fast = info_gain_predicted(&m, s(z), 0).unwrap();
            let slow = info_gain_dense(&m, s(z), 0);
            prop_assert!(fast >= 0.0);
            prop_assert!((fast - slow).abs() < 1e-10 * (1.0 + slow));
            for h in 0..9 {
                let r = info_gain_retrospective(&m, s(z), 0, s(h)).unwrap();
                let dense = kl_divergence(&m.predict_hypothetical(s(z), 0, s(h)).unwrap(), &m.predict(s(z), 0).unwrap()).unwrap();
                prop_assert!(r >= 0.0);
                prop_assert!((r - dense).abs() < 1e-10 * (1.0 + dense));
            }
        }

        #[test]
        fn novelty_ignores_other_labels(counts in prop::collection::vec(1u64..20, 2..8), perm_seed in 0usize..100) {
            let n = counts.len();
            let mut a = CountModel::new(n, 1, None).unwrap();
            let mut b = CountModel::new(n, 1, None).unwrap();
            // state 0 fixed; the others are relabelled by a rotation
            let shift = 1 + perm_seed % (n - 1);
            for (i, &c) in counts.iter().enumerate() {
                let j = if i == 0 { 0 } else { 1 + (i - 1 + shift) % (n - 1) };
                for _ in 0..c {
                    a.register_visit(s(i)).unwrap();
                    b.register_visit(s(j)).unwrap();
                }
            }
            prop_assert_eq!(novelty(&a, s(0)).unwrap(), novelty(&b, s(0)).unwrap());
            prop_assert!(novelty(&a, s(0)).unwrap() >= 0.0);
        }
    }
}
