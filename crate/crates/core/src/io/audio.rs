use std::io::Write;
use std::path::Path;

use super::{read_file, write_file};
use crate::error::{Error, Result};
use crate::stimulus::{LevelTrack, Waveform, WaveformKind};

/// Writes a mono 32-bit float WAV file.
pub fn write_wav(path: &Path, waveform: &Waveform) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: waveform.sample_rate.round() as u32,
        bits_per_sample: 32,
        sample_format: hound::SampleFormat::Float,
    };
    let wrap = |e: hound::Error| match e {
        hound::Error::IoError(e) => Error::io(path, e),
        other => Error::format("WAV", other.to_string()),
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(wrap)?;
    for &s in &waveform.samples {
        writer.write_sample(s as f32).map_err(wrap)?;
    }
    writer.finalize().map_err(wrap)
}

/// Reads a mono 32-bit float WAV file. The file carries no modulation kind, so the caller supplies it.
pub fn read_wav(path: &Path, kind: WaveformKind) -> Result<Waveform> {
    let wrap = |e: hound::Error| match e {
        hound::Error::IoError(e) => Error::io(path, e),
        other => Error::format("WAV", other.to_string()),
    };
    let mut reader = hound::WavReader::open(path).map_err(wrap)?;
    let spec = reader.spec();
    if spec.channels != 1 || spec.sample_format != hound::SampleFormat::Float || spec.bits_per_sample != 32 {
        return Err(Error::format("WAV", "expected mono 32-bit float"));
    }
    let samples = reader
        .samples::<f32>()
        .map(|s| s.map(f64::from))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(wrap)?;
    Ok(Waveform {
        samples,
        sample_rate: f64::from(spec.sample_rate),
        kind,
    })
}

/// Headerless little-endian `f32` samples.
pub fn write_raw_f32(path: &Path, samples: &[f64]) -> Result<()> {
    write_file(path, |out| {
        for &s in samples {
            out.write_all(&(s as f32).to_le_bytes())?;
        }
        Ok(())
    })
}

pub fn read_raw_f32(path: &Path) -> Result<Vec<f32>> {
    let bytes = read_file(path)?;
    if bytes.len() % 4 != 0 {
        return Err(Error::format("raw f32", "length is not a multiple of 4"));
    }
    Ok(bytes
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
        .collect())
}

/// CSV with columns `time_s,level_normalized`, one row per audio sample.
pub fn write_track_csv(path: &Path, track: &LevelTrack) -> Result<()> {
    write_file(path, |out| {
        writeln!(out, "time_s,level_normalized")?;
        for (n, &x) in track.samples.iter().enumerate() {
            writeln!(out, "{},{}", n as f64 / track.sample_rate, x)?;
        }
        Ok(())
    })
}
