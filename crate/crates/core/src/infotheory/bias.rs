use crate::error::{Error, Result};
use crate::rng;

use super::estimator::{entropy, Contingency, PairedSequences};
use super::symbols::SymbolSequence;
use super::MIN_OVERLAP;

/// Least-squares fit of `I(n) = I_inf + a/n + b/n^2`; returns `I_inf`.
///
/// `points` are `(sample count, estimate)` pairs; at least three distinct
/// sample counts are needed.
pub fn quadratic_fit_intercept(points: &[(f64, f64)]) -> Result<f64> {
    let n_max = points.iter().map(|p| p.0).fold(0.0f64, f64::max);
    if points.len() < 3 || !(n_max > 0.0) {
        return Err(Error::data("quadratic extrapolation needs three or more sample sizes"));
    }
    // Regress on k = n_max / n so the design matrix stays well scaled.
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    for &(n, value) in points {
        let k = n_max / n;
        let row = [1.0, k, k * k];
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * value;
        }
    }
    let coeffs = solve3(ata, atb).ok_or_else(|| Error::data("degenerate sample sizes for extrapolation"))?;
    Ok(coeffs[0])
}

/// Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (v, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *v -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Bias-corrected estimate at one delay.
#[derive(Debug, Clone, PartialEq)]
pub struct Extrapolated {
    /// `max(I_inf, 0)`.
    pub bits: f64,
    /// Extrapolated value before clamping.
    pub raw: f64,
    pub clamped: bool,
    /// Plug-in estimates on the full range, averaged halves and averaged quarters.
    pub plugin: [f64; 3],
    /// The full-range joint table the estimates were drawn from.
    pub full_table: Contingency,
}

pub(crate) fn extrapolate_paired(paired: &PairedSequences, delay: i64) -> Result<Extrapolated> {
    let quarters = paired.block_tables(delay, 4);
    let mut halves = [quarters[0].clone(), quarters[2].clone()];
    halves[0].add_assign(&quarters[1]);
    halves[1].add_assign(&quarters[3]);
    let mut full = halves[0].clone();
    full.add_assign(&halves[1]);

    let n = full.total() as f64;
    let mean = |tables: &[Contingency]| {
        tables.iter().map(Contingency::mutual_information).sum::<f64>() / tables.len() as f64
    };
    let plugin = [full.mutual_information(), mean(&halves), mean(&quarters)];
    let raw = quadratic_fit_intercept(&[(n, plugin[0]), (n / 2.0, plugin[1]), (n / 4.0, plugin[2])])?;
    Ok(Extrapolated {
        bits: raw.max(0.0),
        raw,
        clamped: raw < 0.0,
        plugin,
        full_table: full,
    })
}

/// Plug-in MI at the full, half and quarter data sizes (contiguous blocks),
/// extrapolated quadratically in `1/n` to infinite data.
pub fn quadratic_extrapolation(x: &SymbolSequence, w: &SymbolSequence, delay: i64) -> Result<Extrapolated> {
    let paired = PairedSequences::new(x, w)?;
    paired.check_overlap(delay, 4 * MIN_OVERLAP)?;
    extrapolate_paired(&paired, delay)
}

pub(crate) fn shuffle_ratio_paired(paired: &PairedSequences, delay: i64, entropy_x: f64, seed: u64) -> Result<f64> {
    if !(entropy_x > 0.0) {
        return Err(Error::DegenerateInput("stimulus entropy is zero".into()));
    }
    let shuffled = paired.with_shuffled_response(&mut rng::stream(seed, "shuffle-control"));
    Ok(shuffled.table(delay).mutual_information() / entropy_x)
}

/// Plug-in MI after a seeded temporal shuffle of W, normalized by H(X).
pub fn shuffle_control(x: &SymbolSequence, w: &SymbolSequence, delay: i64, seed: u64) -> Result<f64> {
    let paired = PairedSequences::new(x, w)?;
    paired.check_overlap(delay, MIN_OVERLAP)?;
    shuffle_ratio_paired(&paired, delay, entropy(x)?, seed)
}
