use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use spikeinfo::encoders::{EncoderConfig, EncoderKind};
use spikeinfo::harness::{
    emit_outputs, encode_trial, evaluate_trial, prepare_trial_cached, reproduce, run_sweep, stimulus_track,
    EncoderGrid, Figure, ReproduceOptions, Scale, SweepOptions, SweepSpec, Task, TaskSpec,
};
use spikeinfo::{io, Error};

/// Spike-encoder evaluation on synthetic FM and AM stimuli.
#[derive(Parser)]
#[command(name = "spikeinfo", version, about)]
struct Cli {
    /// JSON file with task and sweep settings; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the level track (CSV) and stimulus waveform (WAV and raw f32).
    Stimulus(Common),
    /// Write the cochleagram as CSV and binary.
    Cochleagram(Common),
    /// Encode the cochleagram and write the spikes as CSV events and dense binary.
    Encode(WithEncoder),
    /// Evaluate one encoder configuration on one trial.
    Evaluate(WithEncoder),
    /// Sweep encoder grids over several trials.
    Sweep(SweepArgs),
    /// Rerun a figure's sweep and check its operating points.
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct Common {
    /// frequency or amplitude.
    #[arg(long)]
    task: Option<Task>,
    /// Stimulus length in seconds.
    #[arg(long)]
    duration: Option<f64>,
    /// Master seed; single-trial commands use its first trial.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct WithEncoder {
    #[command(flatten)]
    common: Common,
    /// Encoder, e.g. `lif(tau=2,theta=1.3)` or a JSON object.
    #[arg(long)]
    encoder: EncoderConfig,
    /// Read the cochleagram from this binary file instead of computing it.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    trials: Option<usize>,
    /// Restrict to these encoders (comma separated).
    #[arg(long, value_delimiter = ',')]
    encoder: Vec<EncoderKind>,
    /// JSON file with a `grids` list replacing the default grids.
    #[arg(long)]
    grid_file: Option<PathBuf>,
    /// Cochleagram cache directory.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// fig7 (frequency task) or fig9 (amplitude task).
    figure: Figure,
    /// 60 s x 3 trials with widened tolerances instead of 300 s x 5 trials.
    #[arg(long)]
    fast: bool,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    grid_file: Option<PathBuf>,
    #[arg(long)]
    cache: Option<PathBuf>,
}

/// Contents of `--config`; every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    task: Option<Task>,
    duration: Option<f64>,
    n_trials: Option<usize>,
    master_seed: Option<u64>,
    delay_min: Option<i64>,
    delay_max: Option<i64>,
    grids: Option<Vec<EncoderGrid>>,
    cache_dir: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other),
        }
    }
}

type CliResult<T> = Result<T, Failure>;

fn task_spec(cfg: &ConfigFile, c: &Common, trials: Option<usize>) -> CliResult<TaskSpec> {
    let mut spec = TaskSpec::default();
    spec.task = c.task.or(cfg.task).unwrap_or(spec.task);
    spec.duration = c.duration.or(cfg.duration).unwrap_or(spec.duration);
    spec.n_trials = trials.or(cfg.n_trials).unwrap_or(spec.n_trials);
    spec.master_seed = c.seed.or(cfg.master_seed).unwrap_or(spec.master_seed);
    spec.delay_min = cfg.delay_min.unwrap_or(spec.delay_min);
    spec.delay_max = cfg.delay_max.unwrap_or(spec.delay_max);
    spec.validate()?;
    Ok(spec)
}

fn sweep_spec(cfg: &ConfigFile, grid_file: Option<&Path>, only: &[EncoderKind]) -> CliResult<SweepSpec> {
    let mut spec = match (grid_file, &cfg.grids) {
        (Some(path), _) => io::read_json::<SweepSpec>(path)?,
        (None, Some(grids)) => SweepSpec { grids: grids.clone() },
        (None, None) => SweepSpec::default(),
    };
    if !only.is_empty() {
        spec.grids.retain(|g| only.contains(&g.kind()));
        for &k in only {
            if !spec.grids.iter().any(|g| g.kind() == k) {
                spec.grids.push(EncoderGrid::default_for(k));
            }
        }
    }
    Ok(spec)
}

fn create_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(Error::Io { path: dir.into(), source: e }))
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> CliResult<bool> {
    let cfg: ConfigFile = match &cli.config {
        Some(path) => io::read_json(path).map_err(|e| Failure::Usage(e.to_string()))?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Stimulus(c) => {
            let spec = task_spec(&cfg, &c, Some(1))?;
            let track = stimulus_track(&spec, spec.trial_seed(0))?;
            let waveform = spec.task.synthesize(&track)?;
            create_dir(&c.out)?;
            let paths = [c.out.join("track.csv"), c.out.join("stimulus.wav"), c.out.join("stimulus.f32")];
            io::write_track_csv(&paths[0], &track)?;
            io::write_wav(&paths[1], &waveform)?;
            io::write_raw_f32(&paths[2], &waveform.samples)?;
            report_written(&paths);
        }
        Command::Cochleagram(c) => {
            let spec = task_spec(&cfg, &c, Some(1))?;
            let inputs = prepare_trial_cached(&spec, spec.trial_seed(0), cfg.cache_dir.as_deref())?;
            create_dir(&c.out)?;
            let paths = [c.out.join("cochleagram.csv"), c.out.join("cochleagram.coch")];
            io::write_cochleagram_csv(&paths[0], &inputs.cochleagram)?;
            io::write_cochleagram_bin(&paths[1], &inputs.cochleagram)?;
            report_written(&paths);
        }
        Command::Encode(e) => {
            let spec = task_spec(&cfg, &e.common, Some(1))?;
            let seed = spec.trial_seed(0);
            let coch = match &e.input {
                Some(path) => io::read_cochleagram_bin(path)?,
                None => prepare_trial_cached(&spec, seed, cfg.cache_dir.as_deref())?.cochleagram,
            };
            let (spikes, _) = encode_trial(&coch, &e.encoder, spikeinfo::rng::derive_seed(seed, "encoder"))?;
            create_dir(&e.common.out)?;
            let paths = [e.common.out.join("spikes.csv"), e.common.out.join("spikes.bin")];
            io::write_spikes_csv(&paths[0], &spikes)?;
            io::write_spikes_bin(&paths[1], &spikes)?;
            report_written(&paths);
        }
        Command::Evaluate(e) => {
            let spec = task_spec(&cfg, &e.common, Some(1))?;
            let seed = spec.trial_seed(0);
            let mut inputs = prepare_trial_cached(&spec, seed, cfg.cache_dir.as_deref())?;
            if let Some(path) = &e.input {
                inputs = spikeinfo::harness::trial_from_cochleagram(&spec, seed, io::read_cochleagram_bin(path)?)?;
            }
            let outcome = evaluate_trial(&spec, &inputs, &e.encoder, seed)?;
            let r = &outcome.result;
            create_dir(&e.common.out)?;
            let paths = [e.common.out.join("result.json"), e.common.out.join("curve.csv")];
            io::write_eval_json(&paths[0], r)?;
            io::write_curve_csv(&paths[1], &r.curve, inputs.cochleagram.frame_rate)?;
            println!(
                "{}: efficiency {:.4}, spike density {:.4}, coding power {:.4} of {:.4} bits, peak delay {} ms, shuffle {:.5}",
                e.encoder, r.efficiency, r.spike_density, r.coding_power_bits, r.entropy_bits, r.argmax_delay_frames, r.shuffle_error
            );
            report_written(&paths);
        }
        Command::Sweep(s) => {
            let spec = task_spec(&cfg, &s.common, s.trials)?;
            let sweep = sweep_spec(&cfg, s.grid_file.as_deref(), &s.encoder)?;
            let cache_dir = s.cache.or(cfg.cache_dir);
            let result = run_sweep(&spec, &sweep, &SweepOptions { cache_dir })?;
            for kind in EncoderKind::ALL {
                if let Some(row) = result.best(kind) {
                    let st = row.stats.expect("best rows have statistics");
                    println!("{kind} best: eps {:.4} at rho {:.4} ({})", st.eps_mean, st.rho_mean, row.params);
                }
            }
            if result.n_failures() > 0 {
                eprintln!("{} grid-point trials failed; see results.json", result.n_failures());
            }
            report_written(&emit_outputs(&result, &s.common.out)?);
        }
        Command::Reproduce(r) => {
            let mut opts = ReproduceOptions::new(r.figure, if r.fast { Scale::Fast } else { Scale::Full });
            opts.master_seed = r.seed.or(cfg.master_seed).unwrap_or(opts.master_seed);
            opts.cache_dir = r.cache.or(cfg.cache_dir.clone());
            if r.grid_file.is_some() || cfg.grids.is_some() {
                opts.sweep = Some(sweep_spec(&cfg, r.grid_file.as_deref(), &[])?);
            }
            let report = reproduce(&opts)?;
            print!("{}", report.render());
            let mut paths = emit_outputs(&report.sweep, &r.out)?;
            let json = r.out.join("report.json");
            io::write_json(&json, &report)?;
            paths.push(json);
            report_written(&paths);
            return Ok(report.passed());
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
