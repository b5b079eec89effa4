use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::grid::SweepSpec;
use super::sweep::{run_sweep, SweepOptions, SweepResult, SweepRow};
use super::task::{Task, TaskSpec};
use crate::encoders::{EncoderConfig, EncoderKind};
use crate::error::{Error, Result};

/// Shuffle-control ceilings for bipolar (SoD) and unipolar encoders.
pub const SHUFFLE_LIMIT_SOD: f64 = 0.016;
pub const SHUFFLE_LIMIT_UNIPOLAR: f64 = 0.0016;
/// Largest acceptable standard error of ε and ρ at a best point.
pub const SEM_LIMIT: f64 = 0.005;
/// Widening of every ε and ρ window in fast mode.
pub const FAST_TOLERANCE: f64 = 0.08;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// Frequency task.
    Fig7,
    /// Amplitude task.
    Fig9,
}

impl Figure {
    pub fn task(self) -> Task {
        match self {
            Figure::Fig7 => Task::Frequency,
            Figure::Fig9 => Task::Amplitude,
        }
    }
}

impl std::str::FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "fig7" | "7" => Ok(Figure::Fig7),
            "fig9" | "9" => Ok(Figure::Fig9),
            other => Err(Error::param(format!("unknown figure `{other}` (fig7 or fig9)"))),
        }
    }
}

impl std::fmt::Display for Figure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Figure::Fig7 => "fig7",
            Figure::Fig9 => "fig9",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    /// 300 s stimuli, 5 trials.
    Full,
    /// 60 s stimuli, 3 trials, widened windows.
    Fast,
}

impl Scale {
    pub fn duration(self) -> f64 {
        match self {
            Scale::Full => 300.0,
            Scale::Fast => 60.0,
        }
    }

    pub fn n_trials(self) -> usize {
        match self {
            Scale::Full => 5,
            Scale::Fast => 3,
        }
    }

    pub fn tolerance(self) -> f64 {
        match self {
            Scale::Full => 0.0,
            Scale::Fast => FAST_TOLERANCE,
        }
    }
}

/// A closed interval, widened symmetrically by a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Window { lo, hi }
    }

    pub fn widened(self, tol: f64) -> Self {
        Window::new(self.lo - tol, self.hi + tol)
    }

    pub fn contains(self, v: f64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:.2}, {:.2}]", self.lo, self.hi)
    }
}

/// A published operating point and the window it is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Target {
    pub eps: f64,
    pub rho: f64,
    pub eps_window: Window,
    pub rho_window: Window,
}

pub const FIG7_LIF: Target = Target {
    eps: 0.80,
    rho: 0.18,
    eps_window: Window::new(0.75, 0.85),
    rho_window: Window::new(0.13, 0.23),
};
pub const FIG7_BSA_M3: Target = Target {
    eps: 0.71,
    rho: 0.13,
    eps_window: Window::new(0.66, 0.76),
    rho_window: Window::new(0.09, 0.17),
};
pub const FIG7_SOD_RHO: Window = Window::new(0.26, 0.40);
pub const FIG7_SOD_GAP: f64 = 0.06;
pub const FIG9_BSA_M9: Target = Target {
    eps: 0.71,
    rho: 0.73,
    eps_window: Window::new(0.66, 0.76),
    rho_window: Window::new(0.66, 0.80),
};
pub const FIG9_LIF_TAU2: Target = Target {
    eps: 0.63,
    rho: 0.26,
    eps_window: Window::new(0.58, 0.68),
    rho_window: Window::new(0.20, 0.32),
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatingPoint {
    pub label: String,
    pub params: String,
    pub eps: f64,
    pub rho: f64,
    pub eps_sem: f64,
    pub rho_sem: f64,
    pub shuffle_error: f64,
    pub argmax_delay_frames: f64,
    pub target: Option<Target>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproReport {
    pub figure: Figure,
    pub scale: Scale,
    pub points: Vec<OperatingPoint>,
    pub criteria: Vec<Criterion>,
    pub sweep: SweepResult,
}

impl ReproReport {
    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.passed)
    }

    /// Plain-text report, one line per operating point and per criterion.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let t = &self.sweep.task;
        let _ = writeln!(
            s,
            "{} ({} task, {} s x {} trials, seed {})",
            self.figure, t.task, t.duration, t.n_trials, t.master_seed
        );
        for p in &self.points {
            let _ = write!(
                s,
                "  {:<12} eps {:.3} +- {:.4}  rho {:.3} +- {:.4}  delay {:+.1} ms  shuffle {:.5}  [{}]",
                p.label, p.eps, p.eps_sem, p.rho, p.rho_sem, p.argmax_delay_frames, p.shuffle_error, p.params
            );
            if let Some(tg) = p.target {
                let _ = write!(s, "  target eps {:.2} rho {:.2}", tg.eps, tg.rho);
            }
            s.push('\n');
        }
        let failed = self.sweep.n_failures();
        if failed > 0 {
            let _ = writeln!(s, "  {failed} grid-point trials failed (see results.json)");
        }
        for c in &self.criteria {
            let _ = writeln!(s, "{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    pub figure: Figure,
    pub scale: Scale,
    pub master_seed: u64,
    pub cache_dir: Option<PathBuf>,
    /// Grids to sweep; the defaults when `None`.
    pub sweep: Option<SweepSpec>,
}

impl ReproduceOptions {
    pub fn new(figure: Figure, scale: Scale) -> Self {
        ReproduceOptions {
            figure,
            scale,
            master_seed: 1,
            cache_dir: None,
            sweep: None,
        }
    }

    pub fn task_spec(&self) -> TaskSpec {
        TaskSpec::new(self.figure.task(), self.scale.duration(), self.scale.n_trials(), self.master_seed)
    }
}

/// Runs the figure's sweep and checks the published operating points.
pub fn reproduce(opts: &ReproduceOptions) -> Result<ReproReport> {
    let sweep = opts.sweep.clone().unwrap_or_default();
    let result = run_sweep(
        &opts.task_spec(),
        &sweep,
        &SweepOptions {
            cache_dir: opts.cache_dir.clone(),
        },
    )?;
    Ok(assess(opts.figure, opts.scale, result))
}

fn point(label: &str, row: &SweepRow, target: Option<Target>) -> Option<OperatingPoint> {
    let s = row.stats?;
    Some(OperatingPoint {
        label: label.to_string(),
        params: row.params.clone(),
        eps: s.eps_mean,
        rho: s.rho_mean,
        eps_sem: s.eps_sem,
        rho_sem: s.rho_sem,
        shuffle_error: s.shuffle_error,
        argmax_delay_frames: s.argmax_delay_frames,
        target,
    })
}

fn missing(name: String) -> Criterion {
    Criterion {
        name,
        passed: false,
        detail: "no successful grid point".into(),
    }
}

fn target_check(name: String, p: Option<&OperatingPoint>, tol: f64) -> Criterion {
    let Some(p) = p else { return missing(name) };
    let tg = p.target.expect("target point");
    let (ew, rw) = (tg.eps_window.widened(tol), tg.rho_window.widened(tol));
    Criterion {
        name,
        passed: ew.contains(p.eps) && rw.contains(p.rho),
        detail: format!("eps {:.3} in {ew}, rho {:.3} in {rw}", p.eps, p.rho),
    }
}

fn below_check(name: String, lower: Option<&OperatingPoint>, upper: Option<&OperatingPoint>) -> Criterion {
    match (lower, upper) {
        (Some(l), Some(u)) => Criterion {
            name,
            passed: l.eps < u.eps,
            detail: format!("{:.3} < {:.3}", l.eps, u.eps),
        },
        _ => missing(name),
    }
}

/// Checks a finished sweep against the figure's criteria.
pub fn assess(figure: Figure, scale: Scale, sweep: SweepResult) -> ReproReport {
    let tol = scale.tolerance();
    let is_lif = |c: &EncoderConfig| matches!(c, EncoderConfig::Lif { .. });
    let lif_tau2 = |c: &EncoderConfig| matches!(c, EncoderConfig::Lif { tau, .. } if *tau == 2.0);
    let bsa_m = |m0: usize| move |c: &EncoderConfig| matches!(c, EncoderConfig::Bsa { m, .. } if *m == m0);
    let kind = |k: EncoderKind| move |c: &EncoderConfig| c.kind() == k;

    let mut points = Vec::new();
    let mut criteria = Vec::new();
    let mut add_point = |label: &str, row: Option<&SweepRow>, target: Option<Target>| {
        let p = row.and_then(|r| point(label, r, target));
        if let Some(p) = &p {
            points.push(p.clone());
        }
        p
    };

    match figure {
        Figure::Fig7 => {
            let lif = add_point("LIF", sweep.best_where(is_lif), Some(FIG7_LIF));
            let bsa = add_point("BSA (M=3)", sweep.best_where(bsa_m(3)), Some(FIG7_BSA_M3));
            let sod = add_point("SoD", sweep.best_where(kind(EncoderKind::Sod)), None);
            let isc = add_point("ISC", sweep.best_where(kind(EncoderKind::Isc)), None);
            add_point("BSA (any M)", sweep.best(EncoderKind::Bsa), None);

            criteria.push(target_check("LIF best point".into(), lif.as_ref(), tol));
            criteria.push(target_check("BSA (M=3) best point".into(), bsa.as_ref(), tol));
            criteria.push(match (&sod, &lif) {
                (Some(s), Some(l)) => {
                    let gap = FIG7_SOD_GAP + tol;
                    let rw = FIG7_SOD_RHO.widened(tol);
                    Criterion {
                        name: "SoD best point".into(),
                        passed: (l.eps - s.eps).abs() <= gap && rw.contains(s.rho),
                        detail: format!("|{:.3} - {:.3}| <= {gap:.2}, rho {:.3} in {rw}", s.eps, l.eps, s.rho),
                    }
                }
                _ => missing("SoD best point".into()),
            });
            criteria.push(below_check("ISC below LIF".into(), isc.as_ref(), lif.as_ref()));
        }
        Figure::Fig9 => {
            let bsa = add_point("BSA (M=9)", sweep.best_where(bsa_m(9)), Some(FIG9_BSA_M9));
            let lif = add_point("LIF (tau=2)", sweep.best_where(lif_tau2), Some(FIG9_LIF_TAU2));
            let isc = add_point("ISC", sweep.best_where(kind(EncoderKind::Isc)), None);
            let sod = add_point("SoD", sweep.best_where(kind(EncoderKind::Sod)), None);
            add_point("BSA (any M)", sweep.best(EncoderKind::Bsa), None);
            add_point("LIF (any)", sweep.best(EncoderKind::Lif), None);

            criteria.push(target_check("BSA (M=9) best point".into(), bsa.as_ref(), tol));
            criteria.push(target_check("LIF (tau=2) best point".into(), lif.as_ref(), tol));
            criteria.push(below_check("ISC below LIF (tau=2)".into(), isc.as_ref(), lif.as_ref()));
            criteria.push(below_check("SoD below LIF (tau=2)".into(), sod.as_ref(), lif.as_ref()));
        }
    }

    if scale == Scale::Full {
        let best: Vec<&OperatingPoint> = points.iter().filter(|p| !p.label.contains("any")).collect();
        let worst_sem = best.iter().map(|p| p.eps_sem.max(p.rho_sem)).fold(0.0, f64::max);
        criteria.push(Criterion {
            name: "trial stability".into(),
            passed: !best.is_empty() && worst_sem <= SEM_LIMIT,
            detail: format!("largest SEM at best points {worst_sem:.4} <= {SEM_LIMIT}"),
        });
        let shuffle_ok = best.iter().all(|p| {
            let limit = if p.label == "SoD" { SHUFFLE_LIMIT_SOD } else { SHUFFLE_LIMIT_UNIPOLAR };
            p.shuffle_error < limit
        });
        let listing: Vec<String> = best.iter().map(|p| format!("{} {:.5}", p.label, p.shuffle_error)).collect();
        criteria.push(Criterion {
            name: "shuffle control".into(),
            passed: !best.is_empty() && shuffle_ok,
            detail: listing.join(", "),
        });
    }

    let sod = sweep.sod_checks;
    if sod.channels > 0 {
        criteria.push(Criterion {
            name: "SoD reconstruction identity".into(),
            passed: sod.failures == 0,
            detail: format!("{} of {} channel encodings failed", sod.failures, sod.channels),
        });
    }
    let est = sweep.estimator_checks;
    criteria.push(Criterion {
        name: "estimator inequalities".into(),
        passed: est.estimates > 0 && est.violations == 0,
        detail: format!("{} violations in {} estimates", est.violations, est.estimates),
    });

    ReproReport {
        figure,
        scale,
        points,
        criteria,
        sweep,
    }
}
