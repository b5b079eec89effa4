use std::ffi::{CStr, CString};
use std::ptr;

use spikeinfo_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(spk_last_error()) }.to_string_lossy().into_owned()
}

#[test]
fn version_is_crate_version() {
    let v = unsafe { CStr::from_ptr(spk_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn single_signal_encoders() {
    let z = [0.4, 0.6, 0.5];
    let mut out = [9i8; 3];
    let cfg = CString::new("lif(tau=0,theta=0.5)").unwrap();
    let st = unsafe { spk_encode_signal(z.as_ptr(), z.len(), cfg.as_ptr(), 0, out.as_mut_ptr()) };
    assert_eq!(st, SpkStatus::Ok);
    assert_eq!(out, [0, 1, 1]);

    let z = [0.0, 0.3, 0.6, 0.2];
    let mut out = [9i8; 4];
    let cfg = CString::new(r#"{"encoder":"sod","delta":0.25}"#).unwrap();
    let st = unsafe { spk_encode_signal(z.as_ptr(), z.len(), cfg.as_ptr(), 0, out.as_mut_ptr()) };
    assert_eq!(st, SpkStatus::Ok);
    assert_eq!(out, [0, 1, 1, -1]);
}

#[test]
fn bad_encoder_reports_parameter_error() {
    let z = [0.1; 4];
    let mut out = [0i8; 4];
    let cfg = CString::new("lif(tau=2)").unwrap();
    let st = unsafe { spk_encode_signal(z.as_ptr(), z.len(), cfg.as_ptr(), 0, out.as_mut_ptr()) };
    assert_eq!(st, SpkStatus::InvalidParameter);
    assert!(last_error().contains("theta"), "{}", last_error());
}

#[test]
fn null_pointers_are_rejected() {
    let cfg = CString::new("isc(a=1)").unwrap();
    let st = unsafe { spk_encode_signal(ptr::null(), 3, cfg.as_ptr(), 0, ptr::null_mut()) };
    assert_eq!(st, SpkStatus::NullPointer);
    let st = unsafe { spk_cochleagram_generate(SPK_TASK_AMPLITUDE, 1.0, 1, ptr::null_mut()) };
    assert_eq!(st, SpkStatus::NullPointer);
    unsafe {
        spk_cochleagram_free(ptr::null_mut());
        spk_spikes_free(ptr::null_mut());
        spk_result_free(ptr::null_mut());
        assert_eq!(spk_cochleagram_frames(ptr::null()), 0);
    }
}

#[test]
fn unknown_task_code() {
    let mut h = ptr::null_mut();
    let st = unsafe { spk_cochleagram_generate(7, 1.0, 1, &mut h) };
    assert_eq!(st, SpkStatus::InvalidParameter);
    assert!(h.is_null());
}

#[test]
fn plugin_mi_three_sample_table() {
    let x = [0u32, 0, 1];
    let w = [0u32, 1, 1];
    let mut mi = 0.0;
    assert_eq!(unsafe { spk_plugin_mi(x.as_ptr(), w.as_ptr(), 3, &mut mi) }, SpkStatus::Ok);
    let expected = (2.0 / 3.0) * (1.5f64).log2() + (1.0 / 3.0) * (0.75f64).log2();
    assert!((mi - expected).abs() < 1e-12);
}

#[test]
fn cochleagram_encode_and_file_round_trip() {
    unsafe {
        let mut coch = ptr::null_mut();
        assert_eq!(spk_cochleagram_generate(SPK_TASK_FREQUENCY, 2.0, 3, &mut coch), SpkStatus::Ok);
        assert_eq!(spk_cochleagram_channels(coch), 8);
        let frames = spk_cochleagram_frames(coch);
        assert_eq!(frames, 2000);

        let mut row = vec![0f32; frames];
        assert_eq!(spk_cochleagram_copy_row(coch, 7, row.as_mut_ptr(), frames), SpkStatus::Ok);
        assert!(row.iter().all(|v| (0.0..=1.0).contains(v)));
        assert_eq!(spk_cochleagram_copy_row(coch, 8, row.as_mut_ptr(), frames), SpkStatus::InvalidParameter);
        assert_eq!(spk_cochleagram_copy_row(coch, 0, row.as_mut_ptr(), frames - 1), SpkStatus::BufferSize);

        let dir = tempfile::tempdir().unwrap();
        let path = CString::new(dir.path().join("c.coch").to_str().unwrap()).unwrap();
        assert_eq!(spk_cochleagram_write(coch, path.as_ptr()), SpkStatus::Ok);
        let mut back = ptr::null_mut();
        assert_eq!(spk_cochleagram_read(path.as_ptr(), &mut back), SpkStatus::Ok);
        let mut row2 = vec![0f32; frames];
        spk_cochleagram_copy_row(back, 7, row2.as_mut_ptr(), frames);
        assert_eq!(row, row2);

        let cfg = CString::new("sod(delta=0.01)").unwrap();
        let mut spikes = ptr::null_mut();
        assert_eq!(spk_encode(coch, cfg.as_ptr(), 0, &mut spikes), SpkStatus::Ok);
        assert_eq!((spk_spikes_channels(spikes), spk_spikes_frames(spikes)), (8, frames));
        let mut values = vec![0i8; 8 * frames];
        assert_eq!(spk_spikes_copy(spikes, values.as_mut_ptr(), values.len()), SpkStatus::Ok);
        let mut rho = -1.0;
        assert_eq!(spk_spikes_density(spikes, &mut rho), SpkStatus::Ok);
        let expected = values.iter().map(|&v| f64::from(v.abs())).sum::<f64>() / values.len() as f64;
        assert!((rho - expected).abs() < 1e-15);
        assert!(values.contains(&-1));

        spk_spikes_free(spikes);
        spk_cochleagram_free(back);
        spk_cochleagram_free(coch);
    }
}

#[test]
fn missing_file_is_an_io_error() {
    let path = CString::new("/nonexistent/dir/c.coch").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { spk_cochleagram_read(path.as_ptr(), &mut h) }, SpkStatus::IoError);
    assert!(last_error().contains("/nonexistent/dir/c.coch"));
}

#[test]
fn evaluate_short_amplitude_task() {
    unsafe {
        let cfg = CString::new("lif(tau=2,theta=1.3)").unwrap();
        let mut res = ptr::null_mut();
        assert_eq!(spk_evaluate(SPK_TASK_AMPLITUDE, 10.0, 1, cfg.as_ptr(), &mut res), SpkStatus::Ok);
        let mut s = SpkSummary::default();
        assert_eq!(spk_result_summary(res, &mut s), SpkStatus::Ok);
        assert!(s.efficiency > 0.2 && s.efficiency <= 1.0, "{s:?}");
        assert!(s.spike_density > 0.0 && s.spike_density < 1.0);
        assert!(s.argmax_delay_frames <= 0);
        let n = spk_result_curve_len(res);
        assert_eq!(n, 201);
        let mut d = vec![0i64; n];
        let mut mi = vec![0f64; n];
        assert_eq!(spk_result_copy_curve(res, d.as_mut_ptr(), mi.as_mut_ptr(), n), SpkStatus::Ok);
        assert_eq!((d[0], d[n - 1]), (-100, 100));
        let peak = mi.iter().cloned().fold(f64::MIN, f64::max);
        assert!((peak - s.coding_power_bits).abs() < 1e-12);
        spk_result_free(res);
    }
}
