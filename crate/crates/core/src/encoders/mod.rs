//! The four spike encoders and the spike matrix they produce.
//!
//! Every encoder maps one cochleagram channel (a signal in `[0, 1]` at the
//! frame rate) to a spike train over `{-1, 0, +1}`. Only send-on-delta emits
//! negative spikes.

mod bsa;
mod isc;
mod lif;
mod sod;

pub use bsa::{design_bsa_filter, encode_bsa};
pub use isc::{encode_isc, encode_isc_with};
pub use lif::encode_lif;
pub use sod::{encode_sod, encode_sod_traced, sod_reconstruction_holds, SodTrace};

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cochleagram::Cochleagram;
use crate::error::{Error, Result};
use crate::rng;

/// BSA filter cutoff used when none is given, Hz.
pub const BSA_DEFAULT_CUTOFF: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Unipolar,
    Bipolar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpikeMatrix {
    values: Vec<i8>,
    n_channels: usize,
    n_frames: usize,
    pub frame_rate: f64,
    pub polarity: Polarity,
}

impl SpikeMatrix {
    pub fn from_rows(rows: Vec<Vec<i8>>, polarity: Polarity, frame_rate: f64) -> Result<Self> {
        let n_channels = rows.len();
        let n_frames = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_frames) {
            return Err(Error::data("spike rows differ in length"));
        }
        let values = rows.concat();
        Self::check_values(&values, polarity)?;
        Ok(SpikeMatrix {
            values,
            n_channels,
            n_frames,
            frame_rate,
            polarity,
        })
    }

    pub fn from_flat(values: Vec<i8>, n_channels: usize, n_frames: usize, polarity: Polarity, frame_rate: f64) -> Result<Self> {
        if values.len() != n_channels * n_frames {
            return Err(Error::data(format!(
                "{} values for a {n_channels}x{n_frames} matrix",
                values.len()
            )));
        }
        Self::check_values(&values, polarity)?;
        Ok(SpikeMatrix {
            values,
            n_channels,
            n_frames,
            frame_rate,
            polarity,
        })
    }

    fn check_values(values: &[i8], polarity: Polarity) -> Result<()> {
        let lowest = match polarity {
            Polarity::Unipolar => 0,
            Polarity::Bipolar => -1,
        };
        match values.iter().find(|&&v| !(lowest..=1).contains(&v)) {
            Some(v) => Err(Error::data(format!("spike value {v} invalid for {polarity:?} matrix"))),
            None => Ok(()),
        }
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn row(&self, channel: usize) -> &[i8] {
        &self.values[channel * self.n_frames..(channel + 1) * self.n_frames]
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.values
    }

    #[inline]
    pub fn get(&self, channel: usize, frame: usize) -> i8 {
        self.values[channel * self.n_frames + frame]
    }
}

/// One encoder and its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "encoder", rename_all = "lowercase")]
pub enum EncoderConfig {
    /// Independent stochastic spiking with probability `min(a z, 1)`.
    Isc { a: f64 },
    /// Send-on-delta with step `delta`.
    Sod { delta: f64 },
    /// Ben's spiker algorithm with an `m`-tap low-pass FIR.
    Bsa { m: usize, theta: f64, cutoff: f64 },
    /// Leaky integrate-and-fire; `tau` in frames.
    Lif { tau: f64, theta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EncoderKind {
    Isc,
    Sod,
    Bsa,
    Lif,
}

impl EncoderKind {
    pub const ALL: [EncoderKind; 4] = [EncoderKind::Isc, EncoderKind::Sod, EncoderKind::Bsa, EncoderKind::Lif];

    pub fn name(self) -> &'static str {
        match self {
            EncoderKind::Isc => "isc",
            EncoderKind::Sod => "sod",
            EncoderKind::Bsa => "bsa",
            EncoderKind::Lif => "lif",
        }
    }
}

impl std::str::FromStr for EncoderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "isc" => Ok(EncoderKind::Isc),
            "sod" => Ok(EncoderKind::Sod),
            "bsa" => Ok(EncoderKind::Bsa),
            "lif" => Ok(EncoderKind::Lif),
            other => Err(Error::param(format!("unknown encoder `{other}`"))),
        }
    }
}

impl fmt::Display for EncoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl EncoderConfig {
    pub fn kind(&self) -> EncoderKind {
        match self {
            EncoderConfig::Isc { .. } => EncoderKind::Isc,
            EncoderConfig::Sod { .. } => EncoderKind::Sod,
            EncoderConfig::Bsa { .. } => EncoderKind::Bsa,
            EncoderConfig::Lif { .. } => EncoderKind::Lif,
        }
    }

    pub fn polarity(&self) -> Polarity {
        match self {
            EncoderConfig::Sod { .. } => Polarity::Bipolar,
            _ => Polarity::Unipolar,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EncoderConfig::Isc { a } => a >= 0.0,
            EncoderConfig::Sod { delta } => delta > 0.0,
            EncoderConfig::Bsa { m, theta, cutoff } => {
                m >= 1 && theta >= 0.0 && cutoff > 0.0 && cutoff < crate::cochleagram::FRAME_RATE / 2.0
            }
            EncoderConfig::Lif { tau, theta } => tau >= 0.0 && theta > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::param(format!("invalid encoder parameters: {self}")))
        }
    }

    /// Compact `key=value` parameter list, e.g. `tau=2,theta=0.5`.
    pub fn params_string(&self) -> String {
        match *self {
            EncoderConfig::Isc { a } => format!("a={a}"),
            EncoderConfig::Sod { delta } => format!("delta={delta}"),
            EncoderConfig::Bsa { m, theta, cutoff } => format!("m={m},theta={theta},cutoff={cutoff}"),
            EncoderConfig::Lif { tau, theta } => format!("tau={tau},theta={theta}"),
        }
    }
}

impl fmt::Display for EncoderConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind(), self.params_string())
    }
}

/// Parses either JSON or the `Display` form, e.g. `lif(tau=2,theta=0.5)`.
/// BSA's `cutoff` may be omitted.
impl std::str::FromStr for EncoderConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::param(format!("encoder JSON: {e}")));
        }
        let bad = || Error::param(format!("cannot parse encoder `{s}`; expected e.g. lif(tau=2,theta=0.5)"));
        let (name, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let mut params = std::collections::BTreeMap::new();
        for kv in body.split(',').filter(|kv| !kv.trim().is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            let v: f64 = v.trim().parse().map_err(|_| bad())?;
            params.insert(k.trim().to_ascii_lowercase(), v);
        }
        let mut take = |key: &str| params.remove(key).ok_or_else(|| Error::param(format!("`{s}` lacks `{key}`")));
        let cfg = match name.trim().parse::<EncoderKind>()? {
            EncoderKind::Isc => EncoderConfig::Isc { a: take("a")? },
            EncoderKind::Sod => EncoderConfig::Sod { delta: take("delta")? },
            EncoderKind::Bsa => {
                let m = take("m")?;
                if m.fract() != 0.0 || m < 1.0 {
                    return Err(Error::param(format!("BSA length must be a positive integer, got {m}")));
                }
                EncoderConfig::Bsa {
                    m: m as usize,
                    theta: take("theta")?,
                    cutoff: take("cutoff").unwrap_or(BSA_DEFAULT_CUTOFF),
                }
            }
            EncoderKind::Lif => EncoderConfig::Lif {
                tau: take("tau")?,
                theta: take("theta")?,
            },
        };
        if let Some(k) = params.keys().next() {
            return Err(Error::param(format!("unexpected parameter `{k}` for {}", cfg.kind())));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Encodes a single channel signal.
pub fn encode_signal(z: &[f64], config: &EncoderConfig, seed: u64, channel: usize) -> Result<Vec<i8>> {
    config.validate()?;
    Ok(match *config {
        EncoderConfig::Isc { a } => encode_isc(z, a, rng::derive_indexed(seed, "isc", channel as u64))?,
        EncoderConfig::Sod { delta } => encode_sod(z, delta)?,
        EncoderConfig::Bsa { m, theta, cutoff } => {
            let h = design_bsa_filter(m, cutoff, crate::cochleagram::FRAME_RATE)?;
            encode_bsa(z, &h, theta)
        }
        EncoderConfig::Lif { tau, theta } => encode_lif(z, tau, theta)?,
    })
}

/// Runs one independent encoding unit per cochleagram channel.
pub fn encode_channelwise(coch: &Cochleagram, config: &EncoderConfig, seed: u64) -> Result<SpikeMatrix> {
    config.validate()?;
    let rows = (0..coch.n_channels())
        .into_par_iter()
        .map(|c| encode_signal(&coch.channel_signal(c), config, seed, c))
        .collect::<Result<Vec<_>>>()?;
    SpikeMatrix::from_rows(rows, config.polarity(), coch.frame_rate)
}
