//! Random-walk level tracks and the FM / AM stimuli built from them.

use std::f64::consts::TAU;

use rand::Rng as _;

use crate::erb;
use crate::error::{Error, Result};
use crate::rng;

pub const SAMPLE_RATE: f64 = 32_000.0;

/// Parameters of the bounded random walk behind a [`LevelTrack`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackParams {
    pub n_levels: usize,
    /// Seconds.
    pub duration: f64,
    /// Shortest linear piece, seconds.
    pub dur_min: f64,
    /// Longest linear piece, seconds.
    pub dur_max: f64,
    pub sample_rate: f64,
}

impl Default for TrackParams {
    fn default() -> Self {
        TrackParams {
            n_levels: 8,
            duration: 300.0,
            dur_min: 0.010,
            dur_max: 0.020,
            sample_rate: SAMPLE_RATE,
        }
    }
}

impl TrackParams {
    pub fn with_duration(duration: f64) -> Self {
        TrackParams {
            duration,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_levels < 2 {
            return Err(Error::param(format!("n_levels must be >= 2, got {}", self.n_levels)));
        }
        if !(self.dur_min > 0.0 && self.dur_min <= self.dur_max) {
            return Err(Error::param(format!(
                "need 0 < dur_min <= dur_max, got {} and {}",
                self.dur_min, self.dur_max
            )));
        }
        if !(self.duration > self.dur_max) {
            return Err(Error::param(format!(
                "duration {} must exceed dur_max {}",
                self.duration, self.dur_max
            )));
        }
        if !(self.sample_rate > 0.0) || (self.dur_min * self.sample_rate).round() < 1.0 {
            return Err(Error::param("sample rate too low for the segment durations"));
        }
        Ok(())
    }
}

/// Piecewise-linear characteristic function sampled at the audio rate.
///
/// Vertices sit on integer walk levels; `samples` holds the normalized level
/// `level / (n_levels - 1)` interpolated linearly between vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelTrack {
    pub samples: Vec<f64>,
    pub vertex_levels: Vec<u32>,
    /// Vertex positions in samples; the last one may lie past the end of `samples`.
    pub vertex_positions: Vec<usize>,
    pub n_levels: usize,
    pub sample_rate: f64,
}

impl LevelTrack {
    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate
    }

    pub fn vertex_times(&self) -> Vec<f64> {
        self.vertex_positions
            .iter()
            .map(|&p| p as f64 / self.sample_rate)
            .collect()
    }

    pub fn normalized_level(&self, level: u32) -> f64 {
        f64::from(level) / (self.n_levels - 1) as f64
    }
}

/// Generates a bounded random walk on `{0, .., n_levels-1}` whose vertices
/// are joined by linear pieces of uniformly random duration.
///
/// Each step is drawn uniformly from `{-1, 0, +1}`; a step that would leave
/// the range keeps the current level. Zero steps produce the flat stretches
/// that hold one level for a while, and the clamped boundaries keep the
/// stationary occupancy uniform over all levels.
pub fn generate_level_track(params: &TrackParams, seed: u64) -> Result<LevelTrack> {
    params.validate()?;
    let fs = params.sample_rate;
    let n_samples = (params.duration * fs).round() as usize;
    let top = params.n_levels as u32 - 1;
    let mut walk = rng::stream(seed, "level-walk");

    let mut level = walk.random_range(0..=top);
    let mut pos = 0usize;
    let mut vertex_levels = vec![level];
    let mut vertex_positions = vec![pos];
    while pos + 1 < n_samples {
        let gap = walk.random_range(params.dur_min..=params.dur_max);
        pos += ((gap * fs).round() as usize).max(1);
        let step: i64 = walk.random_range(-1..=1);
        level = (i64::from(level) + step).clamp(0, i64::from(top)) as u32;
        vertex_levels.push(level);
        vertex_positions.push(pos);
    }

    let top_f = f64::from(top);
    let mut samples = Vec::with_capacity(n_samples);
    for (i, seg) in vertex_positions.windows(2).enumerate() {
        let (p0, p1) = (seg[0], seg[1]);
        let (l0, l1) = (f64::from(vertex_levels[i]), f64::from(vertex_levels[i + 1]));
        let span = (p1 - p0) as f64;
        for n in p0..p1.min(n_samples) {
            let frac = (n - p0) as f64 / span;
            samples.push((l0 + (l1 - l0) * frac) / top_f);
        }
    }
    if samples.len() < n_samples {
        // Only reachable when the final vertex lands exactly on the last sample.
        samples.push(f64::from(*vertex_levels.last().unwrap()) / top_f);
    }

    Ok(LevelTrack {
        samples,
        vertex_levels,
        vertex_positions,
        n_levels: params.n_levels,
        sample_rate: fs,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveformKind {
    FrequencyModulated,
    AmplitudeModulated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    pub samples: Vec<f64>,
    pub sample_rate: f64,
    pub kind: WaveformKind,
}

/// Maps a track onto frequencies, linear in ERB-number between `f_min` and `f_max`.
pub fn map_to_erb_frequency(track: &LevelTrack, f_min: f64, f_max: f64) -> Result<Vec<f64>> {
    if !(f_min > 0.0 && f_min < f_max) {
        return Err(Error::param(format!(
            "need 0 < f_min < f_max, got {f_min} and {f_max}"
        )));
    }
    let (e_lo, e_hi) = (erb::hz_to_erb_number(f_min), erb::hz_to_erb_number(f_max));
    Ok(track
        .samples
        .iter()
        .map(|&x| erb::erb_number_to_hz(e_lo + x * (e_hi - e_lo)))
        .collect())
}

/// Maps a track onto amplitudes `a_min * (a_max / a_min)^x`.
pub fn map_to_log_amplitude(track: &LevelTrack, a_min: f64, a_max: f64) -> Result<Vec<f64>> {
    if !(a_min > 0.0 && a_min < a_max) {
        return Err(Error::param(format!(
            "need 0 < a_min < a_max, got {a_min} and {a_max}"
        )));
    }
    let ratio = a_max / a_min;
    Ok(track.samples.iter().map(|&x| a_min * ratio.powf(x)).collect())
}

/// Phase-continuous unit-amplitude cosine following `freq` (Hz per sample).
pub fn synthesize_fm(freq: &[f64], sample_rate: f64) -> Result<Waveform> {
    let nyquist = sample_rate / 2.0;
    if let Some(f) = freq.iter().find(|&&f| !(f.abs() < nyquist)) {
        return Err(Error::param(format!(
            "instantaneous frequency {f} Hz not below Nyquist {nyquist} Hz"
        )));
    }
    let mut phase = 0.0f64;
    let samples = freq
        .iter()
        .enumerate()
        .map(|(n, &f)| {
            if n > 0 {
                phase = (phase + TAU * f / sample_rate) % TAU;
            }
            phase.cos()
        })
        .collect();
    Ok(Waveform {
        samples,
        sample_rate,
        kind: WaveformKind::FrequencyModulated,
    })
}

/// `amp[n] * cos(2π carrier n / sample_rate)`.
pub fn synthesize_am(amp: &[f64], carrier_freq: f64, sample_rate: f64) -> Result<Waveform> {
    if !(carrier_freq.abs() < sample_rate / 2.0) {
        return Err(Error::param(format!(
            "carrier {carrier_freq} Hz not below Nyquist {} Hz",
            sample_rate / 2.0
        )));
    }
    let cycles_per_sample = carrier_freq / sample_rate;
    let samples = amp
        .iter()
        .enumerate()
        .map(|(n, &a)| a * (TAU * (n as f64 * cycles_per_sample).fract()).cos())
        .collect();
    Ok(Waveform {
        samples,
        sample_rate,
        kind: WaveformKind::AmplitudeModulated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn short(n_levels: usize, duration: f64) -> TrackParams {
        TrackParams {
            n_levels,
            duration,
            ..TrackParams::default()
        }
    }

    #[test]
    fn full_length_vertex_count_is_bounded_by_segment_durations() {
        let t = generate_level_track(&TrackParams::default(), 1).unwrap();
        let n = t.vertex_levels.len();
        assert!((15_000..=30_001).contains(&n), "{n} vertices");
        assert_eq!(t.samples.len(), 300 * 32_000);
    }

    #[test]
    fn track_invariants_hold() {
        let t = generate_level_track(&short(8, 5.0), 3).unwrap();
        assert!(t.samples.iter().all(|&x| (0.0..=1.0).contains(&x)));
        for w in t.vertex_levels.windows(2) {
            assert!(w[0].abs_diff(w[1]) <= 1);
        }
        for w in t.vertex_positions.windows(2) {
            let gap = w[1] - w[0];
            assert!((320..=640).contains(&gap), "gap {gap}");
        }
        for (&p, &l) in t.vertex_positions.iter().zip(&t.vertex_levels) {
            if p < t.samples.len() {
                assert_eq!(t.samples[p], t.normalized_level(l));
            }
        }
    }

    #[test]
    fn two_level_walk_stays_on_endpoints() {
        let t = generate_level_track(&short(2, 1.0), 11).unwrap();
        for (&p, &l) in t.vertex_positions.iter().zip(&t.vertex_levels) {
            if p < t.samples.len() {
                assert!(t.samples[p] == 0.0 || t.samples[p] == 1.0);
                assert_eq!(t.samples[p], f64::from(l));
            }
        }
        assert!(t.vertex_levels.windows(2).any(|w| w[0] != w[1]));
    }

    #[test]
    fn walk_steps_are_roughly_a_third_flat() {
        let t = generate_level_track(&short(8, 60.0), 5).unwrap();
        let steps = t.vertex_levels.len() - 1;
        let flat = t.vertex_levels.windows(2).filter(|w| w[0] == w[1]).count();
        let frac = flat as f64 / steps as f64;
        // 6/8 interior levels hold with p = 1/3, 2/8 edge levels with p = 2/3
        assert!((0.38..0.45).contains(&frac), "{frac}");
    }

    #[test]
    fn seeds_are_deterministic_and_distinct() {
        let p = short(8, 2.0);
        let a = generate_level_track(&p, 1).unwrap();
        assert_eq!(a, generate_level_track(&p, 1).unwrap());
        assert_ne!(a.vertex_levels, generate_level_track(&p, 2).unwrap().vertex_levels);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(generate_level_track(&short(1, 1.0), 0).is_err());
        assert!(generate_level_track(&short(8, 0.015), 0).is_err());
        let p = TrackParams {
            dur_min: 0.03,
            ..short(8, 1.0)
        };
        assert!(generate_level_track(&p, 0).is_err());
    }

    #[test]
    fn long_tracks_visit_every_level() {
        let t = generate_level_track(&TrackParams::default(), 5).unwrap();
        let mut occ = [0usize; 8];
        for &l in &t.vertex_levels {
            occ[l as usize] += 1;
        }
        let n = t.vertex_levels.len() as f64;
        assert!(occ.iter().all(|&c| c as f64 / n > 0.01), "{occ:?}");
    }

    fn constant_track(x: f64, n: usize) -> LevelTrack {
        LevelTrack {
            samples: vec![x; n],
            vertex_levels: vec![],
            vertex_positions: vec![],
            n_levels: 8,
            sample_rate: SAMPLE_RATE,
        }
    }

    #[test]
    fn erb_mapping_endpoints_and_midpoint() {
        let f = |x| map_to_erb_frequency(&constant_track(x, 1), 100.0, 10_000.0).unwrap()[0];
        assert!((f(0.0) - 100.0).abs() < 1e-9);
        assert!((f(1.0) - 10_000.0).abs() < 1e-6);
        let mid = f(0.5);
        let e = erb::hz_to_erb_number(mid);
        let want = 0.5 * (erb::hz_to_erb_number(100.0) + erb::hz_to_erb_number(10_000.0));
        assert!((e - want).abs() < 1e-9);
    }

    #[test]
    fn log_amplitude_mapping() {
        let a = |x| map_to_log_amplitude(&constant_track(x, 1), 0.1, 1.0).unwrap()[0];
        assert!((a(0.0) - 0.1).abs() < 1e-15);
        assert!((a(1.0) - 1.0).abs() < 1e-15);
        assert!((a(0.5) - 0.316_227_766_016_837_94).abs() < 1e-12);
        assert!(map_to_log_amplitude(&constant_track(0.5, 1), 0.1, 0.1).is_err());
    }

    #[test]
    fn fm_constant_frequency_is_a_pure_tone() {
        let w = synthesize_fm(&vec![1000.0; 3200], SAMPLE_RATE).unwrap();
        for (n, &s) in w.samples.iter().enumerate() {
            let want = (TAU * 1000.0 * n as f64 / SAMPLE_RATE).cos();
            assert!((s - want).abs() < 1e-9);
        }
        let dc = synthesize_fm(&[0.0; 100], SAMPLE_RATE).unwrap();
        assert!(dc.samples.iter().all(|&s| s == 1.0));
    }

    #[test]
    fn fm_chirp_zero_crossings() {
        let n = SAMPLE_RATE as usize;
        let freq: Vec<f64> = (0..n).map(|i| 100.0 + 100.0 * i as f64 / n as f64).collect();
        let w = synthesize_fm(&freq, SAMPLE_RATE).unwrap();
        let crossings = w
            .samples
            .windows(2)
            .filter(|p| (p[0] >= 0.0) != (p[1] >= 0.0))
            .count();
        assert!((298..=302).contains(&crossings), "{crossings}");
    }

    #[test]
    fn fm_rejects_nyquist() {
        assert!(synthesize_fm(&[16_000.0], SAMPLE_RATE).is_err());
        assert!(synthesize_am(&[1.0], 16_000.0, SAMPLE_RATE).is_err());
    }

    #[test]
    fn am_peaks() {
        let peak = |a: f64| {
            synthesize_am(&vec![a; 640], 1000.0, SAMPLE_RATE)
                .unwrap()
                .samples
                .iter()
                .fold(0.0f64, |m, s| m.max(s.abs()))
        };
        assert!((peak(1.0) - 1.0).abs() < 1e-12);
        assert_eq!(peak(0.0), 0.0);
        assert!((peak(0.1) - 0.1).abs() < 1e-12);
    }
}
