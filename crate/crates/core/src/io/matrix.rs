use std::io::Write;
use std::path::Path;

use super::{read_file, read_text, write_file, Cursor};
use crate::cochleagram::{Cochleagram, FRAME_RATE};
use crate::encoders::{Polarity, SpikeMatrix};
use crate::error::{Error, Result};

const COCH_MAGIC: &[u8; 8] = b"SPKCOCH1";
const SPIKE_MAGIC: &[u8; 8] = b"SPKTRN01";

/// CSV with a `frame_index,ch0,..` header and one row per frame.
pub fn write_cochleagram_csv(path: &Path, coch: &Cochleagram) -> Result<()> {
    write_file(path, |out| {
        write!(out, "frame_index")?;
        for c in 0..coch.n_channels() {
            write!(out, ",ch{c}")?;
        }
        writeln!(out)?;
        for t in 0..coch.n_frames() {
            write!(out, "{t}")?;
            for c in 0..coch.n_channels() {
                write!(out, ",{}", coch.row(c)[t])?;
            }
            writeln!(out)?;
        }
        Ok(())
    })
}

/// Reads the CSV form back. Centre frequencies are not stored in the CSV and must be supplied.
pub fn read_cochleagram_csv(path: &Path, center_freqs: Vec<f64>) -> Result<Cochleagram> {
    let text = read_text(path)?;
    let bad = |detail: String| Error::format("cochleagram CSV", detail);
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let n_channels = header.split(',').count() - 1;
    if !header.starts_with("frame_index") || n_channels == 0 {
        return Err(bad(format!("unexpected header `{header}`")));
    }
    let mut rows = vec![Vec::new(); n_channels];
    for (t, line) in lines.enumerate() {
        let mut fields = line.split(',');
        let index: usize = fields
            .next()
            .and_then(|f| f.parse().ok())
            .ok_or_else(|| bad(format!("line {}: bad frame index", t + 2)))?;
        if index != t {
            return Err(bad(format!("line {}: frame {index} out of order", t + 2)));
        }
        for row in rows.iter_mut() {
            let v: f32 = fields
                .next()
                .and_then(|f| f.parse().ok())
                .ok_or_else(|| bad(format!("line {}: bad value", t + 2)))?;
            row.push(v);
        }
        if fields.next().is_some() {
            return Err(bad(format!("line {}: too many fields", t + 2)));
        }
    }
    Cochleagram::from_rows(rows, center_freqs, FRAME_RATE)
}

/// Binary layout: magic, `u32` channels, `u64` frames, `f64` frame rate,
/// `f64` centre frequencies, then `f32` values row-major; all little-endian.
pub fn write_cochleagram_bin(path: &Path, coch: &Cochleagram) -> Result<()> {
    write_file(path, |out| {
        out.write_all(COCH_MAGIC)?;
        out.write_all(&(coch.n_channels() as u32).to_le_bytes())?;
        out.write_all(&(coch.n_frames() as u64).to_le_bytes())?;
        out.write_all(&coch.frame_rate.to_le_bytes())?;
        for cf in &coch.center_freqs {
            out.write_all(&cf.to_le_bytes())?;
        }
        for v in coch.as_slice() {
            out.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    })
}

pub fn read_cochleagram_bin(path: &Path) -> Result<Cochleagram> {
    let bytes = read_file(path)?;
    let mut cur = Cursor::new(&bytes, "cochleagram file");
    cur.expect_magic(COCH_MAGIC)?;
    let n_channels = cur.u32()? as usize;
    let n_frames = cur.u64()? as usize;
    let frame_rate = cur.f64()?;
    let center_freqs = (0..n_channels).map(|_| cur.f64()).collect::<Result<Vec<_>>>()?;
    let data = cur.take(n_channels.saturating_mul(n_frames).saturating_mul(4))?;
    cur.finish()?;
    let rows = data
        .chunks_exact(4 * n_frames.max(1))
        .map(|row| {
            row.chunks_exact(4)
                .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
                .collect()
        })
        .collect();
    Cochleagram::from_rows(rows, center_freqs, frame_rate)
}

fn polarity_name(p: Polarity) -> &'static str {
    match p {
        Polarity::Unipolar => "unipolar",
        Polarity::Bipolar => "bipolar",
    }
}

/// Event list: a `#` line with the matrix shape, a `frame,channel,polarity`
/// header, then one row per nonzero entry in frame-major order.
pub fn write_spikes_csv(path: &Path, spikes: &SpikeMatrix) -> Result<()> {
    write_file(path, |out| {
        writeln!(
            out,
            "# channels={},frames={},polarity={},frame_rate={}",
            spikes.n_channels(),
            spikes.n_frames(),
            polarity_name(spikes.polarity),
            spikes.frame_rate
        )?;
        writeln!(out, "frame,channel,polarity")?;
        for t in 0..spikes.n_frames() {
            for c in 0..spikes.n_channels() {
                let v = spikes.get(c, t);
                if v != 0 {
                    writeln!(out, "{t},{c},{v}")?;
                }
            }
        }
        Ok(())
    })
}

pub fn read_spikes_csv(path: &Path) -> Result<SpikeMatrix> {
    let text = read_text(path)?;
    let bad = |detail: String| Error::format("spike CSV", detail);
    let mut lines = text.lines();
    let meta = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or_else(|| bad("missing shape line".into()))?;
    let (mut channels, mut frames, mut polarity, mut frame_rate) = (None, None, None, None);
    for kv in meta.split(',') {
        match kv.split_once('=') {
            Some(("channels", v)) => channels = v.parse::<usize>().ok(),
            Some(("frames", v)) => frames = v.parse::<usize>().ok(),
            Some(("polarity", "unipolar")) => polarity = Some(Polarity::Unipolar),
            Some(("polarity", "bipolar")) => polarity = Some(Polarity::Bipolar),
            Some(("frame_rate", v)) => frame_rate = v.parse::<f64>().ok(),
            _ => return Err(bad(format!("unrecognised shape field `{kv}`"))),
        }
    }
    let (Some(n_channels), Some(n_frames), Some(polarity), Some(frame_rate)) = (channels, frames, polarity, frame_rate)
    else {
        return Err(bad("incomplete shape line".into()));
    };
    if lines.next() != Some("frame,channel,polarity") {
        return Err(bad("missing column header".into()));
    }
    let mut values = vec![0i8; n_channels * n_frames];
    for (i, line) in lines.enumerate() {
        let parsed: Option<(usize, usize, i8)> = (|| {
            let mut f = line.split(',');
            let r = (f.next()?.parse().ok()?, f.next()?.parse().ok()?, f.next()?.parse().ok()?);
            f.next().is_none().then_some(r)
        })();
        let (t, c, v) = parsed.ok_or_else(|| bad(format!("line {}: malformed event", i + 3)))?;
        if t >= n_frames || c >= n_channels || v == 0 {
            return Err(bad(format!("line {}: event out of range", i + 3)));
        }
        values[c * n_frames + t] = v;
    }
    SpikeMatrix::from_flat(values, n_channels, n_frames, polarity, frame_rate)
}

/// Binary layout: magic, `u32` channels, `u64` frames, `u8` polarity
/// (0 unipolar, 1 bipolar), `f64` frame rate, then `i8` values row-major.
pub fn write_spikes_bin(path: &Path, spikes: &SpikeMatrix) -> Result<()> {
    write_file(path, |out| {
        out.write_all(SPIKE_MAGIC)?;
        out.write_all(&(spikes.n_channels() as u32).to_le_bytes())?;
        out.write_all(&(spikes.n_frames() as u64).to_le_bytes())?;
        out.write_all(&[u8::from(spikes.polarity == Polarity::Bipolar)])?;
        out.write_all(&spikes.frame_rate.to_le_bytes())?;
        let bytes: Vec<u8> = spikes.as_slice().iter().map(|&v| v as u8).collect();
        out.write_all(&bytes)
    })
}

pub fn read_spikes_bin(path: &Path) -> Result<SpikeMatrix> {
    let bytes = read_file(path)?;
    let mut cur = Cursor::new(&bytes, "spike file");
    cur.expect_magic(SPIKE_MAGIC)?;
    let n_channels = cur.u32()? as usize;
    let n_frames = cur.u64()? as usize;
    let polarity = match cur.u8()? {
        0 => Polarity::Unipolar,
        1 => Polarity::Bipolar,
        p => return Err(Error::format("spike file", format!("polarity byte {p}"))),
    };
    let frame_rate = cur.f64()?;
    let data = cur.take(n_channels.saturating_mul(n_frames))?;
    cur.finish()?;
    let values = data.iter().map(|&b| b as i8).collect();
    SpikeMatrix::from_flat(values, n_channels, n_frames, polarity, frame_rate)
}
