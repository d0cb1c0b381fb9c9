//! Small helpers for finite probability distributions.

use rand::Rng;

use crate::error::{CoreError, Result};
use crate::tol::PROB_TOL;

/// Checks that `p` is a probability vector: nonnegative entries summing to 1
/// within `tolerance`.
pub fn validate_distribution(p: &[f64], tolerance: f64, what: &str) -> Result<()> {
    if p.is_empty() {
        return Err(CoreError::InvalidDistribution(format!("{what}: empty")));
    }
    let mut sum = 0.0;
    for (i, &x) in p.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(CoreError::InvalidDistribution(format!(
                "{what}: entry {i} is {x}"
            )));
        }
        sum += x;
    }
    if (sum - 1.0).abs() > tolerance {
        return Err(CoreError::InvalidDistribution(format!(
            "{what}: sums to {sum}, off by {:e}",
            (sum - 1.0).abs()
        )));
    }
    Ok(())
}

/// `validate_distribution` with the standard [`PROB_TOL`] tolerance.
pub fn validate_distribution_std(p: &[f64], what: &str) -> Result<()> {
    validate_distribution(p, PROB_TOL, what)
}

/// Draws an index from a categorical distribution by CDF inversion.
///
/// Consumes exactly one uniform draw, so the call sequence is reproducible
/// for a given RNG state. Ties and rounding resolve toward lower indices;
/// the final index absorbs any floating-point shortfall.
pub fn sample_categorical<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    debug_assert!(!p.is_empty());
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &w) in p.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

/// Samples a point in the probability simplex (flat Dirichlet) by
/// normalizing unit exponentials.
pub fn random_distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    debug_assert!(n > 0);
    let mut v: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            -(1.0 - u).ln()
        })
        .collect();
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    v
}

/// Log of the sum of exponentials, stable under large negative inputs.
/// Entries of negative infinity contribute zero mass.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let s: f64 = xs.iter().map(|&x| (x - m).exp()).sum();
    m + s.ln()
}

/// Normalizes log-weights into a probability vector via max-shift.
/// Entries of negative infinity map to exactly zero.
pub fn normalize_log_weights(log_w: &[f64]) -> Result<Vec<f64>> {
    let lse = log_sum_exp(log_w);
    if lse == f64::NEG_INFINITY {
        return Err(CoreError::RealizabilityViolation);
    }
    Ok(log_w
        .iter()
        .map(|&x| {
            if x == f64::NEG_INFINITY {
                0.0
            } else {
                (x - lse).exp()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn categorical_point_mass() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let p = [0.0, 1.0, 0.0];
        for _ in 0..100 {
            assert_eq!(sample_categorical(&p, &mut rng), 1);
        }
    }

    #[test]
    fn random_distribution_sums_to_one() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for n in 1..8 {
            let d = random_distribution(n, &mut rng);
            validate_distribution_std(&d, "draw").unwrap();
        }
    }

    #[test]
    fn log_sum_exp_handles_neg_infinity() {
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        let v = log_sum_exp(&[0.0, f64::NEG_INFINITY]);
        assert!((v - 0.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_log_weights_all_excluded_is_error() {
        assert!(normalize_log_weights(&[f64::NEG_INFINITY; 2]).is_err());
    }
}
