use crate::error::{Error, Result};

/// Leaky integrate-and-fire coding with the signal as membrane current.
///
/// `tau` is in frames; `tau == 0` removes the leak term entirely, which makes
/// the unit a per-frame threshold on `z`. The potential starts at `z(1)` and
/// resets to zero after every spike.
pub fn encode_lif(z: &[f64], tau: f64, theta: f64) -> Result<Vec<i8>> {
    if !(theta > 0.0) {
        return Err(Error::param(format!("LIF threshold must be > 0, got {theta}")));
    }
    if !(tau >= 0.0) {
        return Err(Error::param(format!("LIF time constant must be >= 0, got {tau}")));
    }
    let decay = if tau == 0.0 { 0.0 } else { (-1.0 / tau).exp() };
    let mut u = z.first().copied().unwrap_or(0.0);
    Ok(z.iter()
        .map(|&current| {
            u = u * decay + current;
            if u >= theta {
                u = 0.0;
                1
            } else {
                0
            }
        })
        .collect())
}
