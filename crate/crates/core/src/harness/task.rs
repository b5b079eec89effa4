use serde::{Deserialize, Serialize};

use crate::cochleagram::{design_filterbank, extract_cochleagram, Cochleagram, FilterBankSpec};
use crate::encoders::{encode_signal, encode_sod_traced, sod_reconstruction_holds, EncoderConfig, SpikeMatrix};
use crate::error::{Error, Result};
use crate::infotheory::{
    build_history_words, build_population_words, entropy, evaluate, quantize_characteristic, EvalOptions,
    EvalResult, SymbolSequence, DEFAULT_MAX_DELAY, HISTORY_WINDOW, POPULATION_SIZE,
};
use crate::rng;
use crate::stimulus::{
    generate_level_track, map_to_erb_frequency, map_to_log_amplitude, synthesize_am, synthesize_fm, LevelTrack,
    TrackParams, Waveform, SAMPLE_RATE,
};

pub const FM_MIN_HZ: f64 = 100.0;
pub const FM_MAX_HZ: f64 = 10_000.0;
pub const AM_MIN: f64 = 0.1;
pub const AM_MAX: f64 = 1.0;
pub const AM_CARRIER_HZ: f64 = 1000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    /// FM stimulus, 8-channel cochleagram, population words.
    Frequency,
    /// AM stimulus, single 1 kHz channel, history words.
    Amplitude,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Frequency => "frequency",
            Task::Amplitude => "amplitude",
        }
    }

    pub fn channels(self) -> usize {
        match self {
            Task::Frequency => POPULATION_SIZE,
            Task::Amplitude => 1,
        }
    }

    pub fn filterbank(self) -> Result<FilterBankSpec> {
        match self {
            Task::Frequency => design_filterbank(POPULATION_SIZE, FM_MIN_HZ, FM_MAX_HZ, SAMPLE_RATE),
            Task::Amplitude => design_filterbank(1, AM_CARRIER_HZ, AM_CARRIER_HZ, SAMPLE_RATE),
        }
    }

    pub fn synthesize(self, track: &LevelTrack) -> Result<Waveform> {
        match self {
            Task::Frequency => synthesize_fm(&map_to_erb_frequency(track, FM_MIN_HZ, FM_MAX_HZ)?, SAMPLE_RATE),
            Task::Amplitude => synthesize_am(
                &map_to_log_amplitude(track, AM_MIN, AM_MAX)?,
                AM_CARRIER_HZ,
                SAMPLE_RATE,
            ),
        }
    }

    /// The spike variable W for this task.
    pub fn response_words(self, spikes: &SpikeMatrix) -> Result<SymbolSequence> {
        match self {
            Task::Frequency => build_population_words(spikes),
            Task::Amplitude => build_history_words(spikes, HISTORY_WINDOW),
        }
    }
}

impl std::str::FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "frequency" | "freq" | "fm" => Ok(Task::Frequency),
            "amplitude" | "amp" | "am" => Ok(Task::Amplitude),
            other => Err(Error::param(format!("unknown task `{other}`"))),
        }
    }
}

impl std::fmt::Display for Task {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TaskSpec {
    pub task: Task,
    /// Stimulus length, seconds.
    pub duration: f64,
    pub n_trials: usize,
    pub master_seed: u64,
    pub delay_min: i64,
    pub delay_max: i64,
}

impl Default for TaskSpec {
    fn default() -> Self {
        TaskSpec {
            task: Task::Frequency,
            duration: 300.0,
            n_trials: 5,
            master_seed: 1,
            delay_min: -DEFAULT_MAX_DELAY,
            delay_max: DEFAULT_MAX_DELAY,
        }
    }
}

impl TaskSpec {
    pub fn new(task: Task, duration: f64, n_trials: usize, master_seed: u64) -> Self {
        TaskSpec {
            task,
            duration,
            n_trials,
            master_seed,
            ..TaskSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::param("need at least one trial"));
        }
        if !(self.delay_min <= 0 && self.delay_max >= 0) {
            return Err(Error::param("delay range must contain zero"));
        }
        Ok(())
    }

    /// Seed of trial `index`; distinct trials get unrelated stimuli and encoder noise.
    pub fn trial_seed(&self, index: usize) -> u64 {
        rng::derive_indexed(self.master_seed, "trial", index as u64)
    }

    pub fn channels(&self) -> usize {
        self.task.channels()
    }
}

/// Everything about one trial that does not depend on the encoder.
#[derive(Debug, Clone)]
pub struct TrialInputs {
    pub stimulus: SymbolSequence,
    pub cochleagram: Cochleagram,
    pub entropy_bits: f64,
}

pub fn stimulus_track(task: &TaskSpec, trial_seed: u64) -> Result<LevelTrack> {
    generate_level_track(
        &TrackParams::with_duration(task.duration),
        rng::derive_seed(trial_seed, "stimulus"),
    )
}

/// Stimulus and cochleagram for one trial.
pub fn prepare_trial(task: &TaskSpec, trial_seed: u64) -> Result<TrialInputs> {
    let track = stimulus_track(task, trial_seed)?;
    let waveform = task.task.synthesize(&track)?;
    let cochleagram = extract_cochleagram(&waveform, &task.task.filterbank()?)?;
    let stimulus = quantize_characteristic(&track)?;
    Ok(TrialInputs {
        entropy_bits: entropy(&stimulus)?,
        stimulus,
        cochleagram,
    })
}

/// Pairs the stimulus track (for X) with a cochleagram obtained elsewhere, e.g. from a cache.
pub fn trial_from_cochleagram(task: &TaskSpec, trial_seed: u64, cochleagram: Cochleagram) -> Result<TrialInputs> {
    let stimulus = quantize_characteristic(&stimulus_track(task, trial_seed)?)?;
    if cochleagram.n_channels() != task.channels() || cochleagram.n_frames() != stimulus.len() {
        return Err(Error::data(format!(
            "cached cochleagram is {}x{}, expected {}x{}",
            cochleagram.n_channels(),
            cochleagram.n_frames(),
            task.channels(),
            stimulus.len()
        )));
    }
    Ok(TrialInputs {
        entropy_bits: entropy(&stimulus)?,
        stimulus,
        cochleagram,
    })
}

/// Send-on-delta identity checks made while encoding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SodChecks {
    pub channels: u64,
    pub failures: u64,
}

impl SodChecks {
    pub fn merge(&mut self, other: &SodChecks) {
        self.channels += other.channels;
        self.failures += other.failures;
    }
}

/// Encodes every channel; SoD channels also verify the baseline reconstruction identity.
pub fn encode_trial(coch: &Cochleagram, config: &EncoderConfig, seed: u64) -> Result<(SpikeMatrix, SodChecks)> {
    config.validate()?;
    let mut checks = SodChecks::default();
    let mut rows = Vec::with_capacity(coch.n_channels());
    for c in 0..coch.n_channels() {
        let z = coch.channel_signal(c);
        let row = match *config {
            EncoderConfig::Sod { delta } => {
                let trace = encode_sod_traced(&z, delta)?;
                checks.channels += 1;
                if !z.is_empty() && !sod_reconstruction_holds(z[0], delta, &trace) {
                    checks.failures += 1;
                }
                trace.spikes
            }
            _ => encode_signal(&z, config, seed, c)?,
        };
        rows.push(row);
    }
    Ok((SpikeMatrix::from_rows(rows, config.polarity(), coch.frame_rate)?, checks))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointOutcome {
    pub result: EvalResult,
    pub sod_checks: SodChecks,
}

/// Encodes a prepared trial and evaluates the spikes against the stimulus.
pub fn evaluate_trial(task: &TaskSpec, inputs: &TrialInputs, config: &EncoderConfig, trial_seed: u64) -> Result<PointOutcome> {
    let (spikes, sod_checks) = encode_trial(&inputs.cochleagram, config, rng::derive_seed(trial_seed, "encoder"))?;
    let words = task.task.response_words(&spikes)?;
    let opts = EvalOptions {
        delay_min: task.delay_min,
        delay_max: task.delay_max,
        shuffle_seed: rng::derive_seed(trial_seed, "shuffle"),
        ..EvalOptions::default()
    };
    let result = evaluate(&inputs.stimulus, &words, crate::infotheory::spike_density(&spikes)?, &opts)?;
    Ok(PointOutcome { result, sod_checks })
}

/// Stimulus → cochleagram → spikes → delay-swept, bias-corrected MI.
pub fn run_task_point(task: &TaskSpec, config: &EncoderConfig, trial_seed: u64) -> Result<EvalResult> {
    task.validate()?;
    let inputs = prepare_trial(task, trial_seed)?;
    evaluate_trial(task, &inputs, config, trial_seed).map(|o| o.result)
}
