//! Discrete stimulus and response variables, plug-in mutual information with
//! bias control, and the coding-efficiency metrics derived from it.

mod bias;
mod estimator;
mod metrics;
mod symbols;

pub use bias::{quadratic_extrapolation, quadratic_fit_intercept, shuffle_control, Extrapolated};
pub use estimator::{
    entropy, entropy_of_slice, plugin_mi_of_slices, plugin_mutual_information, Contingency, PairedSequences,
};
pub use metrics::{
    coding_efficiency, CurvePoint, coding_power, delay_sweep, delay_sweep_with, evaluate, spike_density, CheckTally,
    Estimator, EvalOptions, EvalResult, MiCurve,
};
pub use symbols::{build_history_words, build_population_words, quantize_characteristic, SymbolSequence};

/// Frames ignored at the start of every sequence (cochleagram onset).
pub const ONSET_SKIP_FRAMES: usize = 50;
/// Fewest aligned frame pairs a single plug-in estimate may use.
pub const MIN_OVERLAP: usize = 1000;
/// Quantization levels of the stimulus variable.
pub const X_LEVELS: usize = 8;
/// Units in a population word.
pub const POPULATION_SIZE: usize = 8;
/// Frames in a history word.
pub const HISTORY_WINDOW: usize = 8;
/// Default delay sweep, frames either side of zero.
pub const DEFAULT_MAX_DELAY: i64 = 100;
