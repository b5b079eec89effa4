use spikeinfo::cochleagram::{design_filterbank, extract_cochleagram, EnvelopeLowpass};
use spikeinfo::encoders::EncoderConfig;
use spikeinfo::erb::hz_to_erb_number;
use spikeinfo::harness::{run_task_point, stimulus_track, Task, TaskSpec, FM_MAX_HZ, FM_MIN_HZ};
use spikeinfo::stimulus::{
    generate_level_track, map_to_erb_frequency, map_to_log_amplitude, synthesize_am, TrackParams, SAMPLE_RATE,
};

#[test]
fn fm_cochleagram_peak_follows_nearest_centre_frequency() {
    let spec = TaskSpec::new(Task::Frequency, 20.0, 1, 3);
    let track = stimulus_track(&spec, spec.trial_seed(0)).unwrap();
    let freq = map_to_erb_frequency(&track, FM_MIN_HZ, FM_MAX_HZ).unwrap();
    let bank = Task::Frequency.filterbank().unwrap();
    let coch = extract_cochleagram(&Task::Frequency.synthesize(&track).unwrap(), &bank).unwrap();

    let cf_erb: Vec<f64> = bank.center_freqs.iter().map(|&f| hz_to_erb_number(f)).collect();
    let nearest: Vec<usize> = (0..coch.n_frames())
        .map(|t| {
            let e = hz_to_erb_number(freq[t * 32]);
            (0..cf_erb.len())
                .min_by(|&a, &b| (cf_erb[a] - e).abs().total_cmp(&(cf_erb[b] - e).abs()))
                .unwrap()
        })
        .collect();
    // Transition frames: the nearest channel changed within the last 50 ms.
    let (mut hits, mut counted) = (0usize, 0usize);
    for t in 50..coch.n_frames() {
        if nearest[t - 50..=t].iter().any(|&c| c != nearest[t]) {
            continue;
        }
        let argmax = (0..coch.n_channels())
            .max_by(|&a, &b| coch.row(a)[t].total_cmp(&coch.row(b)[t]))
            .unwrap();
        counted += 1;
        hits += usize::from(argmax == nearest[t]);
    }
    assert!(counted > 1000, "{counted} steady frames");
    let frac = hits as f64 / counted as f64;
    assert!(frac >= 0.8, "argmax agreement {frac}");
}

#[test]
fn am_envelope_is_recoverable() {
    let track = generate_level_track(&TrackParams::with_duration(5.0), 8).unwrap();
    let amp = map_to_log_amplitude(&track, 0.1, 1.0).unwrap();
    let wave = synthesize_am(&amp, 1000.0, SAMPLE_RATE).unwrap();
    // Full-wave rectification has mean 2A/pi; a 200 Hz low-pass removes the 2 kHz ripple.
    let mut lp = EnvelopeLowpass::new(200.0, SAMPLE_RATE);
    let env: Vec<f64> = wave
        .samples
        .iter()
        .map(|&s| lp.process(s.abs()) * std::f64::consts::FRAC_PI_2)
        .collect();
    let onset = (0.05 * SAMPLE_RATE) as usize;
    let best = (0..=160)
        .map(|lag| {
            let (mut err, mut power) = (0.0, 0.0);
            for n in onset + lag..env.len() {
                err += (env[n] - amp[n - lag]).powi(2);
                power += amp[n - lag].powi(2);
            }
            (err / power).sqrt()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(best < 0.05, "relative RMS error {best}");
}

#[test]
fn louder_tones_give_larger_cochleagram_values() {
    let bank = design_filterbank(1, 1000.0, 1000.0, SAMPLE_RATE).unwrap();
    let n = 16_000;
    let tone = |a: f64| -> Vec<f64> {
        (0..n)
            .map(|i| a * (std::f64::consts::TAU * 1000.0 * i as f64 / SAMPLE_RATE).cos())
            .collect()
    };
    // Normalisation hides absolute level, so put both tones in one signal.
    let mut both = tone(0.2);
    both.extend(tone(0.6));
    let wave = spikeinfo::stimulus::Waveform {
        samples: both,
        sample_rate: SAMPLE_RATE,
        kind: spikeinfo::stimulus::WaveformKind::AmplitudeModulated,
    };
    let coch = extract_cochleagram(&wave, &bank).unwrap();
    let row = coch.row(0);
    assert!(row[490] < row[990]);
    assert!((f64::from(row[990]) - 1.0).abs() < 0.01);
    let ratio = f64::from(row[490]) / f64::from(row[990]);
    assert!((ratio - (1.0f64 / 3.0).cbrt()).abs() < 0.02, "{ratio}");
}

#[test]
fn silent_isc_carries_no_information() {
    let spec = TaskSpec::new(Task::Amplitude, 8.0, 1, 2);
    let r = run_task_point(&spec, &EncoderConfig::Isc { a: 0.0 }, spec.trial_seed(0)).unwrap();
    assert_eq!(r.spike_density, 0.0);
    assert_eq!(r.efficiency, 0.0);
    assert_eq!(r.shuffle_error, 0.0);
}

#[test]
fn frequency_task_lif_peaks_in_the_past() {
    let spec = TaskSpec::new(Task::Frequency, 15.0, 1, 5);
    let r = run_task_point(&spec, &EncoderConfig::Lif { tau: 0.0, theta: 0.35 }, spec.trial_seed(0)).unwrap();
    assert!(r.argmax_delay_frames <= 0, "{}", r.argmax_delay_frames);
    assert!(r.efficiency > 0.5 && r.efficiency <= 1.0, "{}", r.efficiency);
    assert!(r.entropy_bits > 2.0 && r.entropy_bits <= 3.0);
    let same = run_task_point(&spec, &EncoderConfig::Lif { tau: 0.0, theta: 0.35 }, spec.trial_seed(0)).unwrap();
    assert_eq!(r, same);
}
