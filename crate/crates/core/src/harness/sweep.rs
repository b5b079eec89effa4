use std::cmp::Ordering;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::SweepSpec;
use super::task::{evaluate_trial, prepare_trial, trial_from_cochleagram, PointOutcome, SodChecks, TaskSpec, TrialInputs};
use crate::encoders::{EncoderConfig, EncoderKind};
use crate::error::{Error, Result};
use crate::infotheory::CheckTally;
use crate::io;

/// One trial of one grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub spike_density: f64,
    pub efficiency: f64,
    pub coding_power_bits: f64,
    pub entropy_bits: f64,
    pub argmax_delay_frames: i64,
    pub shuffle_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialFailure {
    pub trial: usize,
    pub error: String,
}

/// Across-trial summary of a grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RowStats {
    pub rho_mean: f64,
    pub rho_sem: f64,
    pub eps_mean: f64,
    pub eps_sem: f64,
    /// Mean over trials of the peak delay.
    pub argmax_delay_frames: f64,
    /// Largest shuffle-control ratio over trials.
    pub shuffle_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub encoder: EncoderKind,
    pub params: String,
    pub config: EncoderConfig,
    /// `None` when every trial failed.
    pub stats: Option<RowStats>,
    /// Highest mean efficiency among this encoder's rows.
    pub best: bool,
    /// Trial-averaged MI curve as `(delay_frames, mi_bits)`, kept for best rows only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_curve: Option<Vec<(i64, f64)>>,
    pub trials: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
}

impl SweepRow {
    pub fn eps(&self) -> Option<f64> {
        self.stats.map(|s| s.eps_mean)
    }

    pub fn rho(&self) -> Option<f64> {
        self.stats.map(|s| s.rho_mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub task: TaskSpec,
    /// Sorted by mean spike density; rows without statistics come last.
    pub rows: Vec<SweepRow>,
    pub sod_checks: SodChecks,
    pub estimator_checks: CheckTally,
}

impl SweepResult {
    pub fn rows_for(&self, kind: EncoderKind) -> impl Iterator<Item = &SweepRow> {
        self.rows.iter().filter(move |r| r.encoder == kind)
    }

    /// The marked best row of an encoder.
    pub fn best(&self, kind: EncoderKind) -> Option<&SweepRow> {
        self.rows_for(kind).find(|r| r.best)
    }

    /// Highest mean efficiency among rows whose config satisfies `pred`.
    pub fn best_where(&self, pred: impl Fn(&EncoderConfig) -> bool) -> Option<&SweepRow> {
        best_index(&self.rows, |r| pred(&r.config)).map(|i| &self.rows[i])
    }

    pub fn n_failures(&self) -> usize {
        self.rows.iter().map(|r| r.failures.len()).sum()
    }
}

/// First maximum of mean efficiency in row order, so ties go to the sparser point.
fn best_index(rows: &[SweepRow], pred: impl Fn(&SweepRow) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in rows.iter().enumerate() {
        if r.stats.is_some() && pred(r) && best.is_none_or(|b| r.eps() > rows[b].eps()) {
            best = Some(i);
        }
    }
    best
}

#[derive(Debug, Clone, Default)]
pub struct SweepOptions {
    /// Directory for cached cochleagrams; `None` disables caching.
    pub cache_dir: Option<PathBuf>,
}

/// File name of a cached cochleagram.
pub fn cache_key(task: &TaskSpec, trial_seed: u64) -> String {
    format!("{}-{}s-{:016x}.coch", task.task.name(), task.duration, trial_seed)
}

/// Prepares a trial, reading and filling the cochleagram cache when enabled.
pub fn prepare_trial_cached(task: &TaskSpec, trial_seed: u64, cache_dir: Option<&Path>) -> Result<TrialInputs> {
    let Some(dir) = cache_dir else {
        return prepare_trial(task, trial_seed);
    };
    let path = dir.join(cache_key(task, trial_seed));
    if path.exists() {
        if let Ok(coch) = io::read_cochleagram_bin(&path) {
            if let Ok(inputs) = trial_from_cochleagram(task, trial_seed, coch) {
                return Ok(inputs);
            }
        }
    }
    let inputs = prepare_trial(task, trial_seed)?;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    io::write_cochleagram_bin(&tmp, &inputs.cochleagram)?;
    std::fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))?;
    Ok(inputs)
}

fn mean_sem(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn summarize(trials: &[TrialRecord]) -> Option<RowStats> {
    if trials.is_empty() {
        return None;
    }
    let rho: Vec<f64> = trials.iter().map(|t| t.spike_density).collect();
    let eps: Vec<f64> = trials.iter().map(|t| t.efficiency).collect();
    let (rho_mean, rho_sem) = mean_sem(&rho);
    let (eps_mean, eps_sem) = mean_sem(&eps);
    Some(RowStats {
        rho_mean,
        rho_sem,
        eps_mean,
        eps_sem,
        argmax_delay_frames: trials.iter().map(|t| t.argmax_delay_frames as f64).sum::<f64>() / trials.len() as f64,
        shuffle_error: trials.iter().map(|t| t.shuffle_error).fold(0.0, f64::max),
    })
}

fn mean_curve(outcomes: &[&PointOutcome]) -> Option<Vec<(i64, f64)>> {
    let first = outcomes.first()?;
    let n = outcomes.len() as f64;
    Some(
        first
            .result
            .curve
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let sum: f64 = outcomes.iter().map(|o| o.result.curve.points[i].mi_bits).sum();
                (p.delay_frames, sum / n)
            })
            .collect(),
    )
}

fn compare_rows(a: &SweepRow, b: &SweepRow) -> Ordering {
    match (a.rho(), b.rho()) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
    .then(a.encoder.cmp(&b.encoder))
    .then_with(|| a.params.cmp(&b.params))
}

/// Evaluates every grid point on every trial and aggregates per point.
///
/// Failing points are recorded on their rows; only invalid specs abort.
pub fn run_sweep(task: &TaskSpec, sweep: &SweepSpec, opts: &SweepOptions) -> Result<SweepResult> {
    task.validate()?;
    sweep.validate()?;
    let seeds: Vec<u64> = (0..task.n_trials).map(|i| task.trial_seed(i)).collect();
    let inputs: Vec<Result<TrialInputs, String>> = seeds
        .par_iter()
        .map(|&s| prepare_trial_cached(task, s, opts.cache_dir.as_deref()).map_err(|e| e.to_string()))
        .collect();

    let configs = sweep.configs();
    let jobs: Vec<(usize, usize)> = (0..configs.len())
        .flat_map(|c| (0..seeds.len()).map(move |t| (c, t)))
        .collect();
    let outcomes: Vec<Result<PointOutcome, String>> = jobs
        .par_iter()
        .map(|&(c, t)| match &inputs[t] {
            Ok(inp) => evaluate_trial(task, inp, &configs[c], seeds[t]).map_err(|e| e.to_string()),
            Err(e) => Err(format!("trial preparation failed: {e}")),
        })
        .collect();

    let mut sod_checks = SodChecks::default();
    let mut estimator_checks = CheckTally::default();
    let mut rows: Vec<(SweepRow, Vec<&PointOutcome>)> = Vec::with_capacity(configs.len());
    for (c, config) in configs.iter().enumerate() {
        let mut trials = Vec::new();
        let mut failures = Vec::new();
        let mut ok = Vec::new();
        for (t, &seed) in seeds.iter().enumerate() {
            match &outcomes[c * seeds.len() + t] {
                Ok(o) => {
                    sod_checks.merge(&o.sod_checks);
                    estimator_checks.merge(&o.result.estimator_checks);
                    let r = &o.result;
                    trials.push(TrialRecord {
                        trial: t,
                        seed,
                        spike_density: r.spike_density,
                        efficiency: r.efficiency,
                        coding_power_bits: r.coding_power_bits,
                        entropy_bits: r.entropy_bits,
                        argmax_delay_frames: r.argmax_delay_frames,
                        shuffle_error: r.shuffle_error,
                    });
                    ok.push(o);
                }
                Err(e) => failures.push(TrialFailure {
                    trial: t,
                    error: e.clone(),
                }),
            }
        }
        let row = SweepRow {
            encoder: config.kind(),
            params: config.params_string(),
            config: *config,
            stats: summarize(&trials),
            best: false,
            mean_curve: None,
            trials,
            failures,
        };
        rows.push((row, ok));
    }

    rows.sort_by(|a, b| compare_rows(&a.0, &b.0));
    let (mut rows, kept): (Vec<SweepRow>, Vec<_>) = rows.into_iter().unzip();
    for kind in EncoderKind::ALL {
        if let Some(i) = best_index(&rows, |r| r.encoder == kind) {
            rows[i].best = true;
            rows[i].mean_curve = mean_curve(&kept[i]);
        }
    }

    Ok(SweepResult {
        task: *task,
        rows,
        sod_checks,
        estimator_checks,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `results.json`, `curves.csv` and one `plot_<encoder>.csv` per encoder present.
pub fn emit_outputs(result: &SweepResult, out_dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();

    let json = out_dir.join("results.json");
    io::write_json(&json, result)?;
    written.push(json);

    let curves = out_dir.join("curves.csv");
    io::write_file(&curves, |out| {
        writeln!(
            out,
            "encoder,params,rho_mean,eps_mean,rho_sem,eps_sem,argmax_delay_frames,shuffle_error,best"
        )?;
        for r in &result.rows {
            let s = r.stats;
            writeln!(
                out,
                "{},\"{}\",{},{},{},{},{},{},{}",
                r.encoder,
                r.params,
                opt(s.map(|s| s.rho_mean)),
                opt(s.map(|s| s.eps_mean)),
                opt(s.map(|s| s.rho_sem)),
                opt(s.map(|s| s.eps_sem)),
                opt(s.map(|s| s.argmax_delay_frames)),
                opt(s.map(|s| s.shuffle_error)),
                r.best
            )?;
        }
        Ok(())
    })?;
    written.push(curves);

    for kind in EncoderKind::ALL {
        if result.rows_for(kind).next().is_none() {
            continue;
        }
        let path = out_dir.join(format!("plot_{kind}.csv"));
        io::write_file(&path, |out| {
            writeln!(out, "rho,eps")?;
            for s in result.rows_for(kind).filter_map(|r| r.stats) {
                writeln!(out, "{},{}", s.rho_mean, s.eps_mean)?;
            }
            Ok(())
        })?;
        written.push(path);
    }
    Ok(written)
}
