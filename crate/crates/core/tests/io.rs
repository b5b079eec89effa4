use spikeinfo::cochleagram::Cochleagram;
use spikeinfo::encoders::{Polarity, SpikeMatrix};
use spikeinfo::harness::{Task, TaskSpec};
use spikeinfo::infotheory::{CurvePoint, MiCurve};
use spikeinfo::io::*;
use spikeinfo::stimulus::{generate_level_track, TrackParams, Waveform, WaveformKind};
use spikeinfo::Error;

fn coch() -> Cochleagram {
    let rows = (0..3)
        .map(|c| (0..7).map(|t| ((c * 7 + t) as f32 / 21.0).powf(0.37)).collect())
        .collect();
    Cochleagram::from_rows(rows, vec![100.0, 1000.0, 10_000.0], 1000.0).unwrap()
}

fn spikes() -> SpikeMatrix {
    SpikeMatrix::from_rows(vec![vec![0, 1, -1, 0], vec![1, 0, 0, -1]], Polarity::Bipolar, 1000.0).unwrap()
}

#[test]
fn cochleagram_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let c = coch();
    let bin = dir.path().join("c.coch");
    write_cochleagram_bin(&bin, &c).unwrap();
    assert_eq!(read_cochleagram_bin(&bin).unwrap(), c);

    let csv = dir.path().join("c.csv");
    write_cochleagram_csv(&csv, &c).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("frame_index,ch0,ch1,ch2\n0,"));
    assert_eq!(read_cochleagram_csv(&csv, c.center_freqs.clone()).unwrap(), c);
}

#[test]
fn real_cochleagram_survives_binary_cache() {
    let spec = TaskSpec::new(Task::Frequency, 1.0, 1, 1);
    let inputs = spikeinfo::harness::prepare_trial(&spec, spec.trial_seed(0)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.coch");
    write_cochleagram_bin(&path, &inputs.cochleagram).unwrap();
    assert_eq!(read_cochleagram_bin(&path).unwrap(), inputs.cochleagram);
}

#[test]
fn spikes_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let s = spikes();
    let csv = dir.path().join("s.csv");
    write_spikes_csv(&csv, &s).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(
        text,
        "# channels=2,frames=4,polarity=bipolar,frame_rate=1000\nframe,channel,polarity\n0,1,1\n1,0,1\n2,0,-1\n3,1,-1\n"
    );
    assert_eq!(read_spikes_csv(&csv).unwrap(), s);

    let bin = dir.path().join("s.bin");
    write_spikes_bin(&bin, &s).unwrap();
    assert_eq!(read_spikes_bin(&bin).unwrap(), s);

    let silent = SpikeMatrix::from_rows(vec![vec![0; 5]], Polarity::Unipolar, 1000.0).unwrap();
    write_spikes_csv(&csv, &silent).unwrap();
    assert_eq!(read_spikes_csv(&csv).unwrap(), silent);
}

#[test]
fn malformed_files_are_format_errors() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("junk");
    std::fs::write(&p, b"not a cochleagram").unwrap();
    assert!(matches!(read_cochleagram_bin(&p), Err(Error::Format { .. })));
    assert!(matches!(read_spikes_bin(&p), Err(Error::Format { .. })));
    assert!(matches!(read_spikes_csv(&p), Err(Error::Format { .. })));

    write_cochleagram_bin(&p, &coch()).unwrap();
    let mut bytes = std::fs::read(&p).unwrap();
    bytes.pop();
    std::fs::write(&p, &bytes).unwrap();
    assert!(matches!(read_cochleagram_bin(&p), Err(Error::Format { .. })));

    std::fs::write(&p, "# channels=1,frames=2,polarity=unipolar,frame_rate=1000\nframe,channel,polarity\n0,0,-1\n")
        .unwrap();
    assert!(read_spikes_csv(&p).is_err());
    assert!(matches!(read_cochleagram_bin(&dir.path().join("missing")), Err(Error::Io { .. })));
}

#[test]
fn wav_and_raw_audio() {
    let dir = tempfile::tempdir().unwrap();
    let w = Waveform {
        samples: vec![0.0, 0.5, -0.25, 1.0, -1.0],
        sample_rate: 32_000.0,
        kind: WaveformKind::AmplitudeModulated,
    };
    let wav = dir.path().join("a.wav");
    write_wav(&wav, &w).unwrap();
    assert_eq!(read_wav(&wav, WaveformKind::AmplitudeModulated).unwrap(), w);

    let raw = dir.path().join("a.f32");
    write_raw_f32(&raw, &w.samples).unwrap();
    assert_eq!(std::fs::metadata(&raw).unwrap().len(), 20);
    let back: Vec<f64> = read_raw_f32(&raw).unwrap().into_iter().map(f64::from).collect();
    assert_eq!(back, w.samples);
}

#[test]
fn track_and_curve_csv() {
    let dir = tempfile::tempdir().unwrap();
    let track = generate_level_track(&TrackParams::with_duration(0.05), 1).unwrap();
    let p = dir.path().join("t.csv");
    write_track_csv(&p, &track).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("time_s,level_normalized"));
    assert_eq!(lines.count(), track.samples.len());

    let curve = MiCurve {
        corrected: true,
        points: vec![
            CurvePoint { delay_frames: -1, mi_bits: 0.5, plugin_bits: 0.6 },
            CurvePoint { delay_frames: 0, mi_bits: 0.25, plugin_bits: 0.3 },
        ],
    };
    write_curve_csv(&p, &curve, 1000.0).unwrap();
    assert_eq!(std::fs::read_to_string(&p).unwrap(), "delay_ms,mi_bits\n-1,0.5\n0,0.25\n");
}
