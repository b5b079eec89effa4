use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Hamming-windowed sinc low-pass of length `m`, clipped to nonnegative taps
/// and normalized to unit sum.
pub fn design_bsa_filter(m: usize, cutoff: f64, frame_rate: f64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::param("BSA filter length must be >= 1"));
    }
    if !(cutoff > 0.0 && cutoff < frame_rate / 2.0) {
        return Err(Error::param(format!(
            "BSA cutoff {cutoff} Hz outside (0, {})",
            frame_rate / 2.0
        )));
    }
    if m == 1 {
        return Ok(vec![1.0]);
    }
    let fc = cutoff / frame_rate;
    let centre = (m - 1) as f64 / 2.0;
    let taps: Vec<f64> = (0..m)
        .map(|n| {
            let x = n as f64 - centre;
            let sinc = if x == 0.0 {
                2.0 * fc
            } else {
                (2.0 * PI * fc * x).sin() / (PI * x)
            };
            let window = 0.54 - 0.46 * (2.0 * PI * n as f64 / (m - 1) as f64).cos();
            (sinc * window).max(0.0)
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    Ok(taps.into_iter().map(|h| h / sum).collect())
}

/// Ben's spiker algorithm.
///
/// At each frame `t >= M-1` the window `z(t-M+1..=t)` is compared with the
/// time-reversed filter; when subtracting the filter lowers the absolute error
/// by at least `theta`, a spike is emitted and the filter is subtracted from a
/// private copy of the signal.
pub fn encode_bsa(z: &[f64], h: &[f64], theta: f64) -> Vec<i8> {
    let m = h.len();
    let mut residual = z.to_vec();
    let mut spikes = vec![0i8; z.len()];
    if m == 0 {
        return spikes;
    }
    for t in (m - 1)..residual.len() {
        let window = &residual[t + 1 - m..=t];
        // window[j] = z(t - (m-1-j)) pairs with h[j].
        let (mut e1, mut e2) = (0.0, 0.0);
        for (&s, &hj) in window.iter().zip(h) {
            e1 += (s - hj).abs();
            e2 += s.abs();
        }
        if e1 <= e2 - theta {
            spikes[t] = 1;
            for (s, &hj) in residual[t + 1 - m..=t].iter_mut().zip(h) {
                *s -= hj;
            }
        }
    }
    spikes
}
