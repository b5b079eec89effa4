use crate::error::{Error, Result};

/// Send-on-delta output together with the tracking baseline after each frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SodTrace {
    pub spikes: Vec<i8>,
    pub baseline: Vec<f64>,
}

/// Send-on-delta coding: an ON spike when the signal rises more than `delta`
/// above the baseline, an OFF spike when it falls more than `delta` below.
/// The baseline moves by one `delta` per spike; at most one spike per frame.
pub fn encode_sod(z: &[f64], delta: f64) -> Result<Vec<i8>> {
    encode_sod_traced(z, delta).map(|t| t.spikes)
}

pub fn encode_sod_traced(z: &[f64], delta: f64) -> Result<SodTrace> {
    if !(delta > 0.0) {
        return Err(Error::param(format!("SoD delta must be > 0, got {delta}")));
    }
    let mut spikes = vec![0i8; z.len()];
    let mut baseline = Vec::with_capacity(z.len());
    let Some(&origin) = z.first() else {
        return Ok(SodTrace { spikes, baseline });
    };
    // The baseline is kept as origin + delta * net so it never drifts from the
    // spike count through repeated floating-point additions.
    let mut net: i64 = 0;
    baseline.push(origin);
    for (t, &v) in z.iter().enumerate().skip(1) {
        let b = origin + delta * net as f64;
        let d = v - b;
        if d > delta {
            spikes[t] = 1;
            net += 1;
        } else if d < -delta {
            spikes[t] = -1;
            net -= 1;
        }
        baseline.push(origin + delta * net as f64);
    }
    Ok(SodTrace { spikes, baseline })
}

/// Checks `b(t) = z(1) + delta * Σ_{s<=t} w(s)` at every frame, bit for bit.
pub fn sod_reconstruction_holds(origin: f64, delta: f64, trace: &SodTrace) -> bool {
    let mut net: i64 = 0;
    trace
        .spikes
        .iter()
        .zip(&trace.baseline)
        .all(|(&w, &b)| {
            net += i64::from(w);
            b == origin + delta * net as f64
        })
}
