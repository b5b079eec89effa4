use serde::{Deserialize, Serialize};

use crate::encoders::{EncoderConfig, EncoderKind, BSA_DEFAULT_CUTOFF};
use crate::error::{Error, Result};

const GRID_POINTS: usize = 15;
pub const LIF_TAUS: [f64; 6] = [0.0, 1.0, 2.0, 5.0, 10.0, 20.0];
pub const BSA_LENGTHS: [usize; 6] = [1, 3, 5, 7, 9, 13];

/// `n` log-spaced values from `lo` to `hi`, rounded to four significant digits.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| round_sig(spaced(a, b, i, n).exp(), 4))
        .collect()
}

/// `n` evenly spaced values from `lo` to `hi`, rounded to four significant digits.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| round_sig(spaced(lo, hi, i, n), 4)).collect()
}

fn spaced(a: f64, b: f64, i: usize, n: usize) -> f64 {
    if n <= 1 {
        a
    } else {
        a + (b - a) * i as f64 / (n - 1) as f64
    }
}

fn round_sig(v: f64, digits: i32) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    let scale = 10f64.powi(digits - 1 - v.abs().log10().floor() as i32);
    (v * scale).round() / scale
}

/// Steady-state membrane value for a constant unit input, `1 / (1 - e^{-1/tau})`.
pub fn lif_unit_gain(tau: f64) -> f64 {
    if tau > 0.0 {
        1.0 / (1.0 - (-1.0 / tau).exp())
    } else {
        1.0
    }
}

/// LIF thresholds at one time constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifFamily {
    pub tau: f64,
    pub theta: Vec<f64>,
}

/// Parameter grid for one encoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "encoder", rename_all = "lowercase")]
pub enum EncoderGrid {
    Isc {
        a: Vec<f64>,
    },
    Sod {
        delta: Vec<f64>,
    },
    /// Every `m` is combined with every `theta`.
    Bsa {
        m: Vec<usize>,
        theta: Vec<f64>,
        #[serde(default = "default_cutoff")]
        cutoff: f64,
    },
    Lif {
        families: Vec<LifFamily>,
    },
}

fn default_cutoff() -> f64 {
    BSA_DEFAULT_CUTOFF
}

impl EncoderGrid {
    pub fn default_for(kind: EncoderKind) -> Self {
        match kind {
            EncoderKind::Isc => EncoderGrid::Isc {
                a: logspace(0.05, 20.0, GRID_POINTS),
            },
            EncoderKind::Sod => EncoderGrid::Sod {
                delta: logspace(0.005, 0.5, GRID_POINTS),
            },
            // The filter sums to one, so thresholds above one never fire.
            EncoderKind::Bsa => EncoderGrid::Bsa {
                m: BSA_LENGTHS.to_vec(),
                theta: linspace(0.0, 1.0, GRID_POINTS),
                cutoff: BSA_DEFAULT_CUTOFF,
            },
            // Thresholds scale with the membrane's unit-input gain so that
            // each family runs from near-saturation down to near silence.
            EncoderKind::Lif => EncoderGrid::Lif {
                families: LIF_TAUS
                    .iter()
                    .map(|&tau| {
                        let g = lif_unit_gain(tau);
                        LifFamily {
                            tau,
                            theta: logspace(0.05 * g, g, GRID_POINTS),
                        }
                    })
                    .collect(),
            },
        }
    }

    pub fn kind(&self) -> EncoderKind {
        match self {
            EncoderGrid::Isc { .. } => EncoderKind::Isc,
            EncoderGrid::Sod { .. } => EncoderKind::Sod,
            EncoderGrid::Bsa { .. } => EncoderKind::Bsa,
            EncoderGrid::Lif { .. } => EncoderKind::Lif,
        }
    }

    pub fn configs(&self) -> Vec<EncoderConfig> {
        match self {
            EncoderGrid::Isc { a } => a.iter().map(|&a| EncoderConfig::Isc { a }).collect(),
            EncoderGrid::Sod { delta } => delta.iter().map(|&delta| EncoderConfig::Sod { delta }).collect(),
            EncoderGrid::Bsa { m, theta, cutoff } => m
                .iter()
                .flat_map(|&m| {
                    theta.iter().map(move |&theta| EncoderConfig::Bsa {
                        m,
                        theta,
                        cutoff: *cutoff,
                    })
                })
                .collect(),
            EncoderGrid::Lif { families } => families
                .iter()
                .flat_map(|f| f.theta.iter().map(|&theta| EncoderConfig::Lif { tau: f.tau, theta }))
                .collect(),
        }
    }
}

/// The encoders and parameter grids of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub grids: Vec<EncoderGrid>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            grids: EncoderKind::ALL.iter().map(|&k| EncoderGrid::default_for(k)).collect(),
        }
    }
}

impl SweepSpec {
    /// Default grids for the listed encoders only.
    pub fn for_encoders(kinds: &[EncoderKind]) -> Self {
        SweepSpec {
            grids: kinds.iter().map(|&k| EncoderGrid::default_for(k)).collect(),
        }
    }

    pub fn configs(&self) -> Vec<EncoderConfig> {
        self.grids.iter().flat_map(EncoderGrid::configs).collect()
    }

    pub fn validate(&self) -> Result<()> {
        for grid in &self.grids {
            let configs = grid.configs();
            if configs.is_empty() {
                return Err(Error::param(format!("empty {} grid", grid.kind())));
            }
            for cfg in &configs {
                cfg.validate()?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_hits_endpoints() {
        let g = logspace(0.05, 20.0, 15);
        assert_eq!((g[0], g[14]), (0.05, 20.0));
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(linspace(0.0, 1.0, 5), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(round_sig(0.123456, 4), 0.1235);
    }

    #[test]
    fn default_grid_sizes() {
        let spec = SweepSpec::default();
        let n: Vec<usize> = spec.grids.iter().map(|g| g.configs().len()).collect();
        assert_eq!(n, vec![15, 15, 6 * 15, 6 * 15]);
        spec.validate().unwrap();
    }

    #[test]
    fn lif_gain_limits() {
        assert_eq!(lif_unit_gain(0.0), 1.0);
        assert!((lif_unit_gain(2.0) - 1.0 / (1.0 - (-0.5f64).exp())).abs() < 1e-15);
    }

    #[test]
    fn grid_file_round_trips() {
        let spec = SweepSpec::default();
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<SweepSpec>(&text).unwrap(), spec);
        let bsa: EncoderGrid = serde_json::from_str(r#"{"encoder":"bsa","m":[3],"theta":[0.5]}"#).unwrap();
        assert_eq!(
            bsa.configs(),
            vec![EncoderConfig::Bsa { m: 3, theta: 0.5, cutoff: 10.0 }]
        );
    }
}
