//! ERB-number (Cam) frequency scale.

/// ERB-number of a frequency in Hz: `21.4 * log10(4.37 f / 1000 + 1)`.
pub fn hz_to_erb_number(f: f64) -> f64 {
    21.4 * (4.37 * f / 1000.0 + 1.0).log10()
}

pub fn erb_number_to_hz(e: f64) -> f64 {
    (10f64.powf(e / 21.4) - 1.0) * 1000.0 / 4.37
}

/// Equivalent rectangular bandwidth of the auditory filter centred at `f`.
pub fn erb_bandwidth(f: f64) -> f64 {
    24.7 * (4.37 * f / 1000.0 + 1.0)
}

/// Frequency at fraction `x` of the way from `f_lo` to `f_hi` on the ERB-number scale.
pub fn erb_interpolate(f_lo: f64, f_hi: f64, x: f64) -> f64 {
    let (e_lo, e_hi) = (hz_to_erb_number(f_lo), hz_to_erb_number(f_hi));
    erb_number_to_hz(e_lo + x * (e_hi - e_lo))
}

/// `n` frequencies equally spaced on the ERB-number scale, endpoints included.
pub fn erb_space(f_lo: f64, f_hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![f_lo],
        _ => (0..n)
            .map(|k| erb_interpolate(f_lo, f_hi, k as f64 / (n - 1) as f64))
            .collect(),
    }
}
