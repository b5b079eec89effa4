//! C interface to `spikeinfo`.
//!
//! Objects cross the boundary as opaque handles that the caller releases with
//! the matching `*_free` function. Every fallible call returns an [`SpkStatus`];
//! on failure [`spk_last_error`] describes the problem.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use spikeinfo::cochleagram::Cochleagram;
use spikeinfo::encoders::{encode_signal, EncoderConfig, SpikeMatrix};
use spikeinfo::harness::{encode_trial, prepare_trial, run_task_point, Task, TaskSpec};
use spikeinfo::infotheory::{plugin_mi_of_slices, spike_density, EvalResult};
use spikeinfo::{io, rng, Error};

pub const SPK_TASK_FREQUENCY: u32 = 0;
pub const SPK_TASK_AMPLITUDE: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidParameter = 2,
    DegenerateInput = 3,
    DataError = 4,
    FormatError = 5,
    IoError = 6,
    BufferSize = 7,
    Panic = 8,
}

/// Cochleagram handle.
pub struct SpkCochleagram(Cochleagram);

/// Spike matrix handle.
pub struct SpkSpikes(SpikeMatrix);

/// Evaluation result handle.
pub struct SpkResult(EvalResult);

/// Scalar part of an evaluation result.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SpkSummary {
    pub efficiency: f64,
    pub spike_density: f64,
    pub coding_power_bits: f64,
    pub entropy_bits: f64,
    pub shuffle_error: f64,
    pub argmax_delay_frames: i64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Failure(SpkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parameter(_) => SpkStatus::InvalidParameter,
            Error::DegenerateInput(_) => SpkStatus::DegenerateInput,
            Error::Data(_) => SpkStatus::DataError,
            Error::Format { .. } => SpkStatus::FormatError,
            Error::Io { .. } => SpkStatus::IoError,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: SpkStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `body`, turning errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> SpkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            SpkStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SpkStatus::Panic
        }
    }
}

fn nonnull<T>(p: *const T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        Err(fail(SpkStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    nonnull(p, what)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SpkStatus::InvalidParameter, format!("{what} is not UTF-8")))
}

fn task_from(code: u32) -> Result<Task, Failure> {
    match code {
        SPK_TASK_FREQUENCY => Ok(Task::Frequency),
        SPK_TASK_AMPLITUDE => Ok(Task::Amplitude),
        other => Err(fail(SpkStatus::InvalidParameter, format!("unknown task code {other}"))),
    }
}

unsafe fn encoder_from(p: *const c_char) -> Result<EncoderConfig, Failure> {
    Ok(c_str(p, "encoder")?.parse::<EncoderConfig>()?)
}

unsafe fn put<T>(out: *mut *mut T, value: T) {
    *out = Box::into_raw(Box::new(value));
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn spk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn spk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Computes the stimulus and cochleagram of trial 0 for `seed`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn spk_cochleagram_generate(
    task: u32,
    duration_s: f64,
    seed: u64,
    out: *mut *mut SpkCochleagram,
) -> SpkStatus {
    guard(|| {
        nonnull(out, "out")?;
        let spec = TaskSpec::new(task_from(task)?, duration_s, 1, seed);
        let inputs = prepare_trial(&spec, spec.trial_seed(0))?;
        put(out, SpkCochleagram(inputs.cochleagram));
        Ok(())
    })
}

/// Reads a cochleagram from the binary cache format.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spk_cochleagram_read(path: *const c_char, out: *mut *mut SpkCochleagram) -> SpkStatus {
    guard(|| {
        nonnull(out, "out")?;
        let path = PathBuf::from(c_str(path, "path")?);
        put(out, SpkCochleagram(io::read_cochleagram_bin(&path)?));
        Ok(())
    })
}

/// Writes a cochleagram in the binary cache format.
///
/// # Safety
/// `handle` must be a live cochleagram handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn spk_cochleagram_write(handle: *const SpkCochleagram, path: *const c_char) -> SpkStatus {
    guard(|| {
        nonnull(handle, "handle")?;
        let path = PathBuf::from(c_str(path, "path")?);
        io::write_cochleagram_bin(&path, &(*handle).0)?;
        Ok(())
    })
}

/// Number of channels, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live cochleagram handle.
#[no_mangle]
pub unsafe extern "C" fn spk_cochleagram_channels(handle: *const SpkCochleagram) -> usize {
    handle.as_ref().map_or(0, |h| h.0.n_channels())
}

/// Number of frames, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live cochleagram handle.
#[no_mangle]
pub unsafe extern "C" fn spk_cochleagram_frames(handle: *const SpkCochleagram) -> usize {
    handle.as_ref().map_or(0, |h| h.0.n_frames())
}

/// Copies one channel into `buf`, which must hold exactly `frames` values.
///
/// # Safety
/// `handle` must be live and `buf` must point to `len` writable floats.
#[no_mangle]
pub unsafe extern "C" fn spk_cochleagram_copy_row(
    handle: *const SpkCochleagram,
    channel: usize,
    buf: *mut f32,
    len: usize,
) -> SpkStatus {
    guard(|| {
        nonnull(handle, "handle")?;
        nonnull(buf, "buf")?;
        let coch = &(*handle).0;
        if channel >= coch.n_channels() {
            return Err(fail(SpkStatus::InvalidParameter, format!("channel {channel} out of range")));
        }
        if len != coch.n_frames() {
            return Err(fail(SpkStatus::BufferSize, format!("buffer holds {len}, need {}", coch.n_frames())));
        }
        ptr::copy_nonoverlapping(coch.row(channel).as_ptr(), buf, len);
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spk_cochleagram_free(handle: *mut SpkCochleagram) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Encodes every channel with `encoder`, given as JSON or as e.g. `lif(tau=2,theta=1.3)`.
///
/// # Safety
/// `handle` must be live, `encoder` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spk_encode(
    handle: *const SpkCochleagram,
    encoder: *const c_char,
    seed: u64,
    out: *mut *mut SpkSpikes,
) -> SpkStatus {
    guard(|| {
        nonnull(handle, "handle")?;
        nonnull(out, "out")?;
        let cfg = encoder_from(encoder)?;
        let (spikes, _) = encode_trial(&(*handle).0, &cfg, seed)?;
        put(out, SpkSpikes(spikes));
        Ok(())
    })
}

/// Encodes a single signal of `n` values into `out` (`n` entries of -1, 0 or +1).
///
/// # Safety
/// `z` must point to `n` readable doubles and `out` to `n` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn spk_encode_signal(
    z: *const f64,
    n: usize,
    encoder: *const c_char,
    seed: u64,
    out: *mut i8,
) -> SpkStatus {
    guard(|| {
        nonnull(z, "z")?;
        nonnull(out, "out")?;
        let cfg = encoder_from(encoder)?;
        let signal = std::slice::from_raw_parts(z, n);
        let spikes = encode_signal(signal, &cfg, seed, 0)?;
        ptr::copy_nonoverlapping(spikes.as_ptr(), out, n);
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a live spike handle.
#[no_mangle]
pub unsafe extern "C" fn spk_spikes_channels(handle: *const SpkSpikes) -> usize {
    handle.as_ref().map_or(0, |h| h.0.n_channels())
}

/// # Safety
/// `handle` must be null or a live spike handle.
#[no_mangle]
pub unsafe extern "C" fn spk_spikes_frames(handle: *const SpkSpikes) -> usize {
    handle.as_ref().map_or(0, |h| h.0.n_frames())
}

/// Mean absolute spike value over all channels and frames.
///
/// # Safety
/// `handle` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spk_spikes_density(handle: *const SpkSpikes, out: *mut f64) -> SpkStatus {
    guard(|| {
        nonnull(handle, "handle")?;
        nonnull(out, "out")?;
        *out = spike_density(&(*handle).0)?;
        Ok(())
    })
}

/// Copies the row-major spike values; `len` must equal channels x frames.
///
/// # Safety
/// `handle` must be live and `buf` must point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn spk_spikes_copy(handle: *const SpkSpikes, buf: *mut i8, len: usize) -> SpkStatus {
    guard(|| {
        nonnull(handle, "handle")?;
        nonnull(buf, "buf")?;
        let values = (*handle).0.as_slice();
        if len != values.len() {
            return Err(fail(SpkStatus::BufferSize, format!("buffer holds {len}, need {}", values.len())));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, len);
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spk_spikes_free(handle: *mut SpkSpikes) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Runs the full pipeline for trial 0 of `seed`.
///
/// # Safety
/// `encoder` must be NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spk_evaluate(
    task: u32,
    duration_s: f64,
    seed: u64,
    encoder: *const c_char,
    out: *mut *mut SpkResult,
) -> SpkStatus {
    guard(|| {
        nonnull(out, "out")?;
        let cfg = encoder_from(encoder)?;
        let spec = TaskSpec::new(task_from(task)?, duration_s, 1, seed);
        let result = run_task_point(&spec, &cfg, spec.trial_seed(0))?;
        put(out, SpkResult(result));
        Ok(())
    })
}

/// # Safety
/// `handle` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn spk_result_summary(handle: *const SpkResult, out: *mut SpkSummary) -> SpkStatus {
    guard(|| {
        nonnull(handle, "handle")?;
        nonnull(out, "out")?;
        let r = &(*handle).0;
        *out = SpkSummary {
            efficiency: r.efficiency,
            spike_density: r.spike_density,
            coding_power_bits: r.coding_power_bits,
            entropy_bits: r.entropy_bits,
            shuffle_error: r.shuffle_error,
            argmax_delay_frames: r.argmax_delay_frames,
        };
        Ok(())
    })
}

/// Number of delays in the MI curve, or 0 for a null handle.
///
/// # Safety
/// `handle` must be null or a live result handle.
#[no_mangle]
pub unsafe extern "C" fn spk_result_curve_len(handle: *const SpkResult) -> usize {
    handle.as_ref().map_or(0, |h| h.0.curve.points.len())
}

/// Copies the curve's delays (frames) and bias-corrected MI (bits).
///
/// # Safety
/// `handle` must be live; `delays` and `mi_bits` must each hold `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn spk_result_copy_curve(
    handle: *const SpkResult,
    delays: *mut i64,
    mi_bits: *mut f64,
    len: usize,
) -> SpkStatus {
    guard(|| {
        nonnull(handle, "handle")?;
        nonnull(delays, "delays")?;
        nonnull(mi_bits, "mi_bits")?;
        let points = &(*handle).0.curve.points;
        if len != points.len() {
            return Err(fail(SpkStatus::BufferSize, format!("buffer holds {len}, need {}", points.len())));
        }
        for (i, p) in points.iter().enumerate() {
            *delays.add(i) = p.delay_frames;
            *mi_bits.add(i) = p.mi_bits;
        }
        Ok(())
    })
}

/// # Safety
/// `handle` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn spk_result_free(handle: *mut SpkResult) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Plug-in mutual information in bits between two aligned symbol sequences.
///
/// # Safety
/// `x` and `w` must each point to `n` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn spk_plugin_mi(x: *const u32, w: *const u32, n: usize, out: *mut f64) -> SpkStatus {
    guard(|| {
        nonnull(x, "x")?;
        nonnull(w, "w")?;
        nonnull(out, "out")?;
        if n == 0 {
            return Err(fail(SpkStatus::DataError, "empty sequences"));
        }
        *out = plugin_mi_of_slices(std::slice::from_raw_parts(x, n), std::slice::from_raw_parts(w, n));
        Ok(())
    })
}

/// Derives the seed of a named stream, as used for trials and encoders.
///
/// # Safety
/// `tag` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn spk_derive_seed(seed: u64, tag: *const c_char) -> u64 {
    match c_str(tag, "tag") {
        Ok(t) => rng::derive_seed(seed, t),
        Err(_) => seed,
    }
}
