use rand::Rng as _;
use rand::SeedableRng;

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Independent spike coding: frame `t` fires with probability `min(z(t) a, 1)`.
///
/// One uniform draw is consumed per frame regardless of the outcome, so the
/// draws line up with the frame index for a given seed.
pub fn encode_isc(z: &[f64], a: f64, seed: u64) -> Result<Vec<i8>> {
    encode_isc_with(z, a, &mut Rng::seed_from_u64(seed))
}

pub fn encode_isc_with(z: &[f64], a: f64, rng: &mut Rng) -> Result<Vec<i8>> {
    if !(a >= 0.0) {
        return Err(Error::param(format!("ISC scaling factor must be >= 0, got {a}")));
    }
    Ok(z.iter()
        .map(|&v| {
            let p = (v * a).min(1.0);
            i8::from(rng.random::<f64>() < p)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_scale_is_silent() {
        assert!(encode_isc(&[0.9; 100], 0.0, 1).unwrap().iter().all(|&s| s == 0));
    }

    #[test]
    fn certain_probability_always_fires() {
        assert!(encode_isc(&[1.0; 100], 1.0, 1).unwrap().iter().all(|&s| s == 1));
        // Clamped: p = min(0.6 * 5, 1) = 1.
        assert!(encode_isc(&[0.6; 100], 5.0, 2).unwrap().iter().all(|&s| s == 1));
    }

    #[test]
    fn empirical_rate_matches_probability() {
        let w = encode_isc(&[0.3; 10_000], 1.0, 42).unwrap();
        let rate = w.iter().map(|&s| f64::from(s)).sum::<f64>() / 10_000.0;
        assert!((rate - 0.3).abs() < 0.01, "{rate}");
        // Three standard errors of a Bernoulli(0.3) mean over 10 000 frames.
        let se = (0.3f64 * 0.7 / 10_000.0).sqrt();
        assert!((rate - 0.3).abs() < 3.0 * se);
    }

    #[test]
    fn negative_scale_rejected() {
        assert!(encode_isc(&[0.5], -0.1, 0).is_err());
    }
}
