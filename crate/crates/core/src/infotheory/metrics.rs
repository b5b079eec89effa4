use serde::{Deserialize, Serialize};

use crate::encoders::SpikeMatrix;
use crate::error::{Error, Result};

use super::bias::{extrapolate_paired, shuffle_ratio_paired};
use super::estimator::{entropy, PairedSequences};
use super::symbols::SymbolSequence;
use super::{DEFAULT_MAX_DELAY, MIN_OVERLAP};

/// Slack for floating-point round-off in the estimator inequality checks.
const INEQUALITY_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub delay_frames: i64,
    /// Reported value: bias-corrected when the curve is corrected.
    pub mi_bits: f64,
    /// Uncorrected plug-in estimate on the full aligned range.
    pub plugin_bits: f64,
}

/// Mutual information as a function of the delay between X and W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiCurve {
    pub corrected: bool,
    pub points: Vec<CurvePoint>,
}

impl MiCurve {
    pub fn delays(&self) -> impl Iterator<Item = i64> + '_ {
        self.points.iter().map(|p| p.delay_frames)
    }

    pub fn mi_bits(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.mi_bits)
    }

    /// Point with the largest reported value; the earliest delay wins ties.
    pub fn peak(&self) -> Option<&CurvePoint> {
        self.points
            .iter()
            .fold(None, |best: Option<&CurvePoint>, p| match best {
                Some(b) if b.mi_bits >= p.mi_bits => Some(b),
                _ => Some(p),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    Plugin,
    QuadraticExtrapolation,
}

/// Running count of estimator sanity checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckTally {
    /// Plug-in estimates checked against `0 <= I <= min(H(X), H(W))` and
    /// against a merged-label relabeling of W.
    pub estimates: u64,
    pub violations: u64,
    /// Delays whose extrapolated value went negative and was clamped to zero.
    pub clamped: u64,
}

impl CheckTally {
    pub fn merge(&mut self, other: &CheckTally) {
        self.estimates += other.estimates;
        self.violations += other.violations;
        self.clamped += other.clamped;
    }
}

fn check_table(table: &super::Contingency, mi: f64, tally: &mut CheckTally) {
    let bound = table.entropy_x().min(table.entropy_w());
    let relabeled = table.merge_columns(2).mutual_information();
    tally.estimates += 1;
    if !(mi >= -INEQUALITY_SLACK && mi <= bound + INEQUALITY_SLACK && relabeled <= mi + INEQUALITY_SLACK) {
        tally.violations += 1;
    }
}

fn sweep_paired(
    paired: &PairedSequences,
    delay_min: i64,
    delay_max: i64,
    estimator: Estimator,
    tally: &mut CheckTally,
) -> Result<MiCurve> {
    if !(delay_min <= 0 && 0 <= delay_max) {
        return Err(Error::param(format!(
            "delay window [{delay_min}, {delay_max}] must contain zero"
        )));
    }
    let min_overlap = match estimator {
        Estimator::Plugin => MIN_OVERLAP,
        Estimator::QuadraticExtrapolation => 4 * MIN_OVERLAP,
    };
    paired.check_overlap(delay_min, min_overlap)?;
    paired.check_overlap(delay_max, min_overlap)?;

    let mut points = Vec::with_capacity((delay_max - delay_min + 1) as usize);
    for delay in delay_min..=delay_max {
        let point = match estimator {
            Estimator::Plugin => {
                let table = paired.table(delay);
                let mi = table.mutual_information();
                check_table(&table, mi, tally);
                CurvePoint {
                    delay_frames: delay,
                    mi_bits: mi,
                    plugin_bits: mi,
                }
            }
            Estimator::QuadraticExtrapolation => {
                let e = extrapolate_paired(paired, delay)?;
                check_table(&e.full_table, e.plugin[0], tally);
                tally.clamped += u64::from(e.clamped);
                CurvePoint {
                    delay_frames: delay,
                    mi_bits: e.bits,
                    plugin_bits: e.plugin[0],
                }
            }
        };
        points.push(point);
    }
    Ok(MiCurve {
        corrected: estimator == Estimator::QuadraticExtrapolation,
        points,
    })
}

/// Bias-corrected MI for every delay in `delay_min..=delay_max`.
pub fn delay_sweep(x: &SymbolSequence, w: &SymbolSequence, delay_min: i64, delay_max: i64) -> Result<MiCurve> {
    delay_sweep_with(x, w, delay_min, delay_max, Estimator::QuadraticExtrapolation)
}

pub fn delay_sweep_with(
    x: &SymbolSequence,
    w: &SymbolSequence,
    delay_min: i64,
    delay_max: i64,
    estimator: Estimator,
) -> Result<MiCurve> {
    let paired = PairedSequences::new(x, w)?;
    sweep_paired(&paired, delay_min, delay_max, estimator, &mut CheckTally::default())
}

/// Maximum of the curve over all delays, bits.
pub fn coding_power(curve: &MiCurve) -> Result<f64> {
    curve
        .peak()
        .map(|p| p.mi_bits)
        .ok_or_else(|| Error::data("empty mutual information curve"))
}

pub fn coding_efficiency(power: f64, entropy_x: f64) -> Result<f64> {
    if !(entropy_x > 0.0) {
        return Err(Error::DegenerateInput("stimulus entropy is zero".into()));
    }
    Ok(power / entropy_x)
}

/// Mean absolute spike value over every unit and frame.
pub fn spike_density(spikes: &SpikeMatrix) -> Result<f64> {
    let values = spikes.as_slice();
    if values.is_empty() {
        return Err(Error::data("empty spike matrix"));
    }
    let active: u64 = values.iter().map(|&v| u64::from(v.unsigned_abs())).sum();
    Ok(active as f64 / values.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub delay_min: i64,
    pub delay_max: i64,
    pub estimator: Estimator,
    pub shuffle_seed: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            delay_min: -DEFAULT_MAX_DELAY,
            delay_max: DEFAULT_MAX_DELAY,
            estimator: Estimator::QuadraticExtrapolation,
            shuffle_seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub coding_power_bits: f64,
    pub entropy_bits: f64,
    pub efficiency: f64,
    pub spike_density: f64,
    pub argmax_delay_frames: i64,
    pub shuffle_error: f64,
    pub estimator_checks: CheckTally,
    pub curve: MiCurve,
}

/// Delay-swept MI between X and W, summarized as coding power, efficiency
/// and the shuffle-control error at the peak delay.
pub fn evaluate(x: &SymbolSequence, w: &SymbolSequence, spike_density: f64, opts: &EvalOptions) -> Result<EvalResult> {
    let paired = PairedSequences::new(x, w)?;
    let entropy_bits = entropy(x)?;
    let mut checks = CheckTally::default();
    let curve = sweep_paired(&paired, opts.delay_min, opts.delay_max, opts.estimator, &mut checks)?;
    let peak = *curve.peak().ok_or_else(|| Error::data("empty delay window"))?;
    let efficiency = coding_efficiency(peak.mi_bits, entropy_bits)?;
    let shuffle_error = shuffle_ratio_paired(&paired, peak.delay_frames, entropy_bits, opts.shuffle_seed)?;
    Ok(EvalResult {
        coding_power_bits: peak.mi_bits,
        entropy_bits,
        efficiency,
        spike_density,
        argmax_delay_frames: peak.delay_frames,
        shuffle_error,
        estimator_checks: checks,
        curve,
    })
}
