//! Brute-force information measures built from explicit joint tables.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `Σ p(x,w) log2(p(x,w) / (p(x) p(w)))` over the observed pairs.
pub fn brute_force_mi(x: &[u32], w: &[u32]) -> f64 {
    assert_eq!(x.len(), w.len());
    let n = x.len() as f64;
    let mut joint: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    let mut px: BTreeMap<u32, f64> = BTreeMap::new();
    let mut pw: BTreeMap<u32, f64> = BTreeMap::new();
    for (&a, &b) in x.iter().zip(w) {
        *joint.entry((a, b)).or_default() += 1.0 / n;
        *px.entry(a).or_default() += 1.0 / n;
        *pw.entry(b).or_default() += 1.0 / n;
    }
    joint
        .iter()
        .map(|(&(a, b), &p)| p * (p / (px[&a] * pw[&b])).log2())
        .sum()
}

pub fn brute_force_entropy(x: &[u32]) -> f64 {
    let n = x.len() as f64;
    let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
    for &a in x {
        *counts.entry(a).or_default() += 1.0;
    }
    -counts.values().map(|&c| (c / n) * (c / n).log2()).sum::<f64>()
}

/// Short random sequence pairs: lengths 1..=20, alphabets 1..=4.
pub fn short_pairs(seed: u64, count: usize) -> Vec<(Vec<u32>, Vec<u32>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=20);
            let (ax, aw) = (rng.random_range(1..=4), rng.random_range(1..=4));
            let x = (0..n).map(|_| rng.random_range(0..ax)).collect();
            let w = (0..n).map(|_| rng.random_range(0..aw)).collect();
            (x, w)
        })
        .collect()
}
