use crate::cochleagram::{decimation_factor, FRAME_RATE};
use crate::encoders::{Polarity, SpikeMatrix};
use crate::error::{Error, Result};
use crate::stimulus::LevelTrack;

use super::{ONSET_SKIP_FRAMES, POPULATION_SIZE};

/// A discrete-alphabet sequence at the frame rate; frames before
/// `onset_skip` take no part in estimation.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSequence {
    pub symbols: Vec<u32>,
    pub alphabet_size: u32,
    pub frame_rate: f64,
    pub onset_skip: usize,
}

impl SymbolSequence {
    pub fn new(symbols: Vec<u32>, alphabet_size: u32, onset_skip: usize) -> Result<Self> {
        if let Some(s) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(Error::data(format!("symbol {s} outside alphabet of size {alphabet_size}")));
        }
        Ok(SymbolSequence {
            symbols,
            alphabet_size,
            frame_rate: FRAME_RATE,
            onset_skip,
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbols that take part in estimation.
    pub fn active(&self) -> &[u32] {
        &self.symbols[self.onset_skip.min(self.symbols.len())..]
    }
}

/// Nearest level index for a normalized value; exact midpoints go to the lower level.
fn nearest_level(x: f64, n_levels: usize) -> u32 {
    let scaled = x * (n_levels - 1) as f64;
    ((scaled - 0.5).ceil().max(0.0) as u32).min(n_levels as u32 - 1)
}

/// Picks every 32nd sample of the track (same phase as the cochleagram
/// decimation) and snaps it to the nearest walk level.
pub fn quantize_characteristic(track: &LevelTrack) -> Result<SymbolSequence> {
    let step = decimation_factor(track.sample_rate)?;
    let symbols = track
        .samples
        .iter()
        .step_by(step)
        .map(|&x| nearest_level(x, track.n_levels))
        .collect();
    SymbolSequence::new(symbols, track.n_levels as u32, ONSET_SKIP_FRAMES)
}

fn base(polarity: Polarity) -> u32 {
    match polarity {
        Polarity::Unipolar => 2,
        Polarity::Bipolar => 3,
    }
}

/// Digit of one spike value: unipolar `{0,1}`, bipolar `{-1,0,+1} -> {0,1,2}`.
#[inline]
fn digit(value: i8, polarity: Polarity) -> u32 {
    match polarity {
        Polarity::Unipolar => value as u32,
        Polarity::Bipolar => (value + 1) as u32,
    }
}

/// Instantaneous response of the 8 units packed into one word per frame,
/// channel 0 least significant.
pub fn build_population_words(spikes: &SpikeMatrix) -> Result<SymbolSequence> {
    if spikes.n_channels() != POPULATION_SIZE {
        return Err(Error::param(format!(
            "population words need {POPULATION_SIZE} channels, got {}",
            spikes.n_channels()
        )));
    }
    let b = base(spikes.polarity);
    let symbols = (0..spikes.n_frames())
        .map(|t| {
            (0..POPULATION_SIZE)
                .rev()
                .fold(0u32, |word, c| word * b + digit(spikes.get(c, t), spikes.polarity))
        })
        .collect();
    SymbolSequence::new(symbols, b.pow(POPULATION_SIZE as u32), ONSET_SKIP_FRAMES)
}

/// Spike pattern of a single unit over frames `t-window+1..=t`; frame `t-j`
/// is digit `j` (the current frame is least significant).
pub fn build_history_words(spikes: &SpikeMatrix, window: usize) -> Result<SymbolSequence> {
    if spikes.n_channels() != 1 {
        return Err(Error::param(format!(
            "history words need a single channel, got {}",
            spikes.n_channels()
        )));
    }
    if window == 0 {
        return Err(Error::param("history window must be >= 1"));
    }
    let b = base(spikes.polarity);
    let alphabet = b
        .checked_pow(window as u32)
        .ok_or_else(|| Error::param(format!("history window {window} too long")))?;
    let train = spikes.row(0);
    let symbols = (0..train.len())
        .map(|t| {
            (0..window).rev().fold(0u32, |word, j| {
                let d = if t >= j { digit(train[t - j], spikes.polarity) } else { digit(0, spikes.polarity) };
                word * b + d
            })
        })
        .collect();
    SymbolSequence::new(symbols, alphabet, ONSET_SKIP_FRAMES.max(window - 1))
}
