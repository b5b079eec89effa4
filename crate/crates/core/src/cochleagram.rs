//! Gammatone filterbank and inner-hair-cell stage producing a cochleagram of
//! auditory-nerve spike probabilities at 1 kHz.

use std::f64::consts::{SQRT_2, TAU};

use rayon::prelude::*;

use crate::erb;
use crate::error::{Error, Result};
use crate::stimulus::Waveform;

pub const FRAME_RATE: f64 = 1000.0;
pub const GAMMATONE_ORDER: usize = 4;
/// Envelope low-pass cutoff, Hz.
pub const IHC_CUTOFF: f64 = 10.0;
/// Gammatone bandwidth in units of ERB(cf).
const BANDWIDTH_FACTOR: f64 = 1.019;

#[derive(Debug, Clone, PartialEq)]
pub struct FilterBankSpec {
    pub center_freqs: Vec<f64>,
    pub filter_order: usize,
    pub sample_rate: f64,
}

impl FilterBankSpec {
    pub fn n_channels(&self) -> usize {
        self.center_freqs.len()
    }
}

/// `n_channels` gammatone filters with centre frequencies equally spaced on
/// the ERB-number scale from `f_lo` to `f_hi`.
pub fn design_filterbank(n_channels: usize, f_lo: f64, f_hi: f64, sample_rate: f64) -> Result<FilterBankSpec> {
    if n_channels == 0 {
        return Err(Error::param("filterbank needs at least one channel"));
    }
    if !(f_lo > 0.0 && f_lo <= f_hi && f_hi < sample_rate / 2.0) {
        return Err(Error::param(format!(
            "need 0 < f_lo <= f_hi < Nyquist, got {f_lo}..{f_hi} at {sample_rate} Hz"
        )));
    }
    if n_channels > 1 && f_lo == f_hi {
        return Err(Error::param("several channels need f_lo < f_hi"));
    }
    Ok(FilterBankSpec {
        center_freqs: erb::erb_space(f_lo, f_hi, n_channels),
        filter_order: GAMMATONE_ORDER,
        sample_rate,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Complex {
    re: f64,
    im: f64,
}

/// Cascade of identical complex one-pole resonators; the real part of the
/// output is an all-pole gammatone with unity gain at its centre frequency.
#[derive(Debug, Clone)]
pub struct Gammatone {
    pole: Complex,
    stage_gain: f64,
    state: Vec<Complex>,
}

impl Gammatone {
    pub fn new(cf: f64, order: usize, sample_rate: f64) -> Result<Self> {
        if !(cf > 0.0 && cf < sample_rate / 2.0) {
            return Err(Error::param(format!("centre frequency {cf} Hz outside (0, Nyquist)")));
        }
        if order == 0 {
            return Err(Error::param("gammatone order must be >= 1"));
        }
        let radius = (-TAU * BANDWIDTH_FACTOR * erb::erb_bandwidth(cf) / sample_rate).exp();
        let theta = TAU * cf / sample_rate;
        Ok(Gammatone {
            pole: Complex {
                re: radius * theta.cos(),
                im: radius * theta.sin(),
            },
            // |g / (1 - p e^{-jθ})| = 1 at the centre frequency.
            stage_gain: 1.0 - radius,
            state: vec![Complex::default(); order],
        })
    }

    #[inline]
    pub fn process(&mut self, x: f64) -> f64 {
        let (pr, pi, g) = (self.pole.re, self.pole.im, self.stage_gain);
        let mut v = Complex { re: x, im: 0.0 };
        for s in &mut self.state {
            let re = g * v.re + pr * s.re - pi * s.im;
            let im = g * v.im + pr * s.im + pi * s.re;
            *s = Complex { re, im };
            v = *s;
        }
        // A real input splits evenly between positive and negative frequencies;
        // only the positive half survives the complex bandpass.
        2.0 * v.re
    }
}

pub fn gammatone_response(signal: &[f64], cf: f64, order: usize, sample_rate: f64) -> Result<Vec<f64>> {
    let mut filter = Gammatone::new(cf, order, sample_rate)?;
    Ok(signal.iter().map(|&x| filter.process(x)).collect())
}

/// Two identical one-pole low-pass sections in cascade (critically damped,
/// no overshoot), tuned so the pair is 3 dB down at `cutoff`.
#[derive(Debug, Clone)]
pub struct EnvelopeLowpass {
    alpha: f64,
    stages: [f64; 2],
}

impl EnvelopeLowpass {
    pub fn new(cutoff: f64, sample_rate: f64) -> Self {
        // |H_1(f)|^2 = 1/(1 + (f/fs1)^2) per section; |H_1(cutoff)|^4 = 1/2.
        let section_cutoff = cutoff / (SQRT_2 - 1.0).sqrt();
        EnvelopeLowpass {
            alpha: 1.0 - (-TAU * section_cutoff / sample_rate).exp(),
            stages: [0.0; 2],
        }
    }

    #[inline]
    pub fn process(&mut self, x: f64) -> f64 {
        self.stages[0] += self.alpha * (x - self.stages[0]);
        self.stages[1] += self.alpha * (self.stages[0] - self.stages[1]);
        self.stages[1]
    }

    /// Magnitude response at `f` Hz.
    pub fn magnitude(&self, f: f64, sample_rate: f64) -> f64 {
        let w = TAU * f / sample_rate;
        let pole = 1.0 - self.alpha;
        let section = self.alpha / (1.0 - pole * w.cos()).hypot(pole * w.sin());
        section * section
    }
}

/// Half-wave rectification, cube-root compression, then 10 Hz envelope smoothing.
#[derive(Debug, Clone)]
pub struct InnerHairCell {
    lowpass: EnvelopeLowpass,
}

impl InnerHairCell {
    pub fn new(sample_rate: f64) -> Self {
        InnerHairCell {
            lowpass: EnvelopeLowpass::new(IHC_CUTOFF, sample_rate),
        }
    }

    #[inline]
    pub fn process(&mut self, bm: f64) -> f64 {
        self.lowpass.process(bm.max(0.0).cbrt())
    }
}

pub fn inner_hair_cell(bm_signal: &[f64], sample_rate: f64) -> Vec<f64> {
    let mut ihc = InnerHairCell::new(sample_rate);
    bm_signal.iter().map(|&x| ihc.process(x)).collect()
}

/// Channels × frames matrix of spike probabilities in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cochleagram {
    values: Vec<f32>,
    n_channels: usize,
    n_frames: usize,
    pub frame_rate: f64,
    pub center_freqs: Vec<f64>,
}

impl Cochleagram {
    pub fn from_rows(rows: Vec<Vec<f32>>, center_freqs: Vec<f64>, frame_rate: f64) -> Result<Self> {
        let n_channels = rows.len();
        if n_channels == 0 || n_channels != center_freqs.len() {
            return Err(Error::data(format!(
                "{} rows but {} centre frequencies",
                n_channels,
                center_freqs.len()
            )));
        }
        let n_frames = rows[0].len();
        if rows.iter().any(|r| r.len() != n_frames) {
            return Err(Error::data("cochleagram rows differ in length"));
        }
        Ok(Cochleagram {
            values: rows.concat(),
            n_channels,
            n_frames,
            frame_rate,
            center_freqs,
        })
    }

    pub fn n_channels(&self) -> usize {
        self.n_channels
    }

    pub fn n_frames(&self) -> usize {
        self.n_frames
    }

    pub fn row(&self, channel: usize) -> &[f32] {
        &self.values[channel * self.n_frames..(channel + 1) * self.n_frames]
    }

    /// Row as `f64`, the form the encoders consume.
    pub fn channel_signal(&self, channel: usize) -> Vec<f64> {
        self.row(channel).iter().map(|&v| f64::from(v)).collect()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f32]> {
        self.values.chunks(self.n_frames.max(1))
    }

    /// Row-major values.
    pub fn as_slice(&self) -> &[f32] {
        &self.values
    }
}

/// Decimation factor from the audio rate to the cochleagram frame rate.
pub fn decimation_factor(sample_rate: f64) -> Result<usize> {
    let factor = sample_rate / FRAME_RATE;
    if factor < 1.0 || factor.fract() != 0.0 {
        return Err(Error::param(format!(
            "sample rate {sample_rate} Hz is not an integer multiple of {FRAME_RATE} Hz"
        )));
    }
    Ok(factor as usize)
}

fn channel_envelope(samples: &[f64], cf: f64, order: usize, sample_rate: f64, step: usize) -> Result<Vec<f64>> {
    let mut gt = Gammatone::new(cf, order, sample_rate)?;
    let mut ihc = InnerHairCell::new(sample_rate);
    let mut out = Vec::with_capacity(samples.len().div_ceil(step));
    for (n, &x) in samples.iter().enumerate() {
        let y = ihc.process(gt.process(x));
        if n % step == 0 {
            out.push(y);
        }
    }
    Ok(out)
}

/// Filters every channel, keeps every 32nd sample and scales the whole matrix
/// so its global maximum is 1.
pub fn extract_cochleagram(waveform: &Waveform, spec: &FilterBankSpec) -> Result<Cochleagram> {
    if waveform.sample_rate != spec.sample_rate {
        return Err(Error::param(format!(
            "waveform at {} Hz but filterbank designed for {} Hz",
            waveform.sample_rate, spec.sample_rate
        )));
    }
    if waveform.samples.is_empty() {
        return Err(Error::DegenerateInput("empty waveform".into()));
    }
    let step = decimation_factor(spec.sample_rate)?;
    let envelopes: Vec<Vec<f64>> = spec
        .center_freqs
        .par_iter()
        .map(|&cf| channel_envelope(&waveform.samples, cf, spec.filter_order, spec.sample_rate, step))
        .collect::<Result<_>>()?;

    let peak = envelopes
        .iter()
        .flatten()
        .fold(0.0f64, |m, &v| if v > m { v } else { m });
    if !(peak > 0.0 && peak.is_finite()) {
        return Err(Error::DegenerateInput(
            "cochleagram is silent (global maximum is zero)".into(),
        ));
    }
    let rows = envelopes
        .into_iter()
        .map(|row| row.into_iter().map(|v| (v / peak).clamp(0.0, 1.0) as f32).collect())
        .collect();
    Cochleagram::from_rows(rows, spec.center_freqs.clone(), FRAME_RATE)
}
