//! Literal transcriptions of the encoder pseudo-code.
//!
//! Indexing stays 1-based by padding index 0, so each pseudo-code line maps
//! onto one statement.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const N_SIGNALS: usize = 100;
pub const LEN: usize = 50;

fn one_based(z: &[f64]) -> Vec<f64> {
    std::iter::once(f64::NAN).chain(z.iter().copied()).collect()
}

pub fn reference_isc(z: &[f64], a: f64, rng: &mut ChaCha8Rng) -> Vec<i8> {
    let z = one_based(z);
    let n = z.len() - 1;
    let mut w = vec![0i8; n + 1];
    for t in 1..=n {
        let r: f64 = rng.random();
        if r < z[t] * a {
            w[t] = 1;
        }
    }
    w[1..].to_vec()
}

pub fn reference_sod(z: &[f64], delta: f64) -> Vec<i8> {
    let z = one_based(z);
    let n = z.len() - 1;
    let mut w = vec![0i8; n + 1];
    let mut b = z[1];
    for t in 2..=n {
        let d = z[t] - b;
        if d > delta {
            w[t] = 1;
            b += delta;
        }
        if d < -delta {
            w[t] = -1;
            b -= delta;
        }
    }
    w[1..].to_vec()
}

pub fn reference_bsa(z: &[f64], h: &[f64], theta: f64) -> Vec<i8> {
    let mut z = one_based(z);
    let h = one_based(h);
    let m = h.len() - 1;
    let n = z.len() - 1;
    let mut w = vec![0i8; n + 1];
    for t in m..=n {
        let mut e1 = 0.0;
        let mut e2 = 0.0;
        for k in 0..m {
            e1 += (z[t - k] - h[m - k]).abs();
            e2 += z[t - k].abs();
        }
        if e1 <= e2 - theta {
            w[t] = 1;
            for k in 0..m {
                z[t - k] -= h[m - k];
            }
        }
    }
    w[1..].to_vec()
}

pub fn reference_lif(z: &[f64], tau: f64, theta: f64) -> Vec<i8> {
    let z = one_based(z);
    let n = z.len() - 1;
    let mut w = vec![0i8; n + 1];
    let mut u = vec![0.0; n + 2];
    u[1] = z[1];
    for t in 1..=n {
        u[t + 1] = u[t] * (-1.0 / tau).exp() + z[t];
        if u[t + 1] >= theta {
            w[t] = 1;
            u[t + 1] = 0.0;
        }
    }
    w[1..].to_vec()
}

/// Random signals in [0, 1]: half white noise, half smoothed random walks.
pub fn signals(seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..N_SIGNALS)
        .map(|i| {
            if i % 2 == 0 {
                (0..LEN).map(|_| rng.random::<f64>()).collect()
            } else {
                let mut x: f64 = rng.random();
                (0..LEN)
                    .map(|_| {
                        x = (x + rng.random_range(-0.1..0.1)).clamp(0.0, 1.0);
                        x
                    })
                    .collect()
            }
        })
        .collect()
}

