use std::path::Path;
use std::process::{Command, Output};

fn spikeinfo(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spikeinfo"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("run spikeinfo")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn stimulus_and_cochleagram_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = spikeinfo(&["stimulus", "--task", "fm", "--duration", "0.5", "--out", "s"], dir.path());
    assert!(o.status.success(), "{o:?}");
    for f in ["track.csv", "stimulus.wav", "stimulus.f32"] {
        assert!(dir.path().join("s").join(f).exists(), "{f}");
    }
    assert_eq!(std::fs::metadata(dir.path().join("s/stimulus.f32")).unwrap().len(), 16_000 * 4);

    let o = spikeinfo(&["cochleagram", "--task", "am", "--duration", "0.5", "--out", "c"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let csv = std::fs::read_to_string(dir.path().join("c/cochleagram.csv")).unwrap();
    assert!(csv.starts_with("frame_index,ch0\n"));
    assert_eq!(csv.lines().count(), 501);

    let o = spikeinfo(
        &["encode", "--input", "c/cochleagram.coch", "--encoder", "lif(tau=2,theta=1)", "--out", "e"],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    assert!(dir.path().join("e/spikes.bin").exists());
}

#[test]
fn evaluate_prints_summary_and_writes_result() {
    let dir = tempfile::tempdir().unwrap();
    let o = spikeinfo(
        &["evaluate", "--task", "amplitude", "--duration", "6", "--encoder", "bsa(m=9,theta=0.85)", "--out", "."],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("efficiency"));
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("result.json")).unwrap()).unwrap();
    for key in ["coding_power_bits", "entropy_bits", "efficiency", "spike_density", "argmax_delay_frames", "shuffle_error", "curve"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    let curve = std::fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    assert_eq!(curve.lines().count(), 202);
}

#[test]
fn sweep_with_grid_and_config_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("grid.json"),
        r#"{"grids":[{"encoder":"sod","delta":[0.02,0.1]},{"encoder":"lif","families":[{"tau":0,"theta":[0.4]}]}]}"#,
    )
    .unwrap();
    std::fs::write(dir.path().join("cfg.json"), r#"{"task":"amplitude","duration":6,"n_trials":2,"master_seed":4}"#)
        .unwrap();
    let o = spikeinfo(&["--config", "cfg.json", "sweep", "--grid-file", "grid.json", "--out", "o"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let curves = std::fs::read_to_string(dir.path().join("o/curves.csv")).unwrap();
    assert_eq!(curves.lines().count(), 4);
    let results: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o/results.json")).unwrap()).unwrap();
    assert_eq!(results["task"]["n_trials"], 2);
    assert_eq!(results["task"]["duration"], 6.0);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(spikeinfo(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(
        spikeinfo(&["evaluate", "--encoder", "lif(tau=2)"], dir.path()).status.code(),
        Some(2)
    );
    assert_eq!(spikeinfo(&["stimulus", "--task", "pitch"], dir.path()).status.code(), Some(2));
    assert_eq!(spikeinfo(&["reproduce", "fig8"], dir.path()).status.code(), Some(2));
    std::fs::write(dir.path().join("cfg.json"), r#"{"tusk":"amplitude"}"#).unwrap();
    assert_eq!(spikeinfo(&["--config", "cfg.json", "stimulus"], dir.path()).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = spikeinfo(
        &["encode", "--input", "missing.coch", "--encoder", "isc(a=1)", "--out", "e"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing.coch"));
}

#[test]
fn failed_reproduction_exits_1() {
    // A one-point LIF grid cannot place every encoder, so criteria fail.
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("grid.json"),
        r#"{"grids":[{"encoder":"lif","families":[{"tau":2,"theta":[5.0]}]}]}"#,
    )
    .unwrap();
    let o = spikeinfo(&["reproduce", "fig9", "--fast", "--grid-file", "grid.json", "--out", "r"], dir.path());
    assert_eq!(o.status.code(), Some(1), "{o:?}");
    let out = stdout(&o);
    assert!(out.contains("FAIL BSA (M=9) best point"), "{out}");
    assert!(dir.path().join("r/report.json").exists());
}
