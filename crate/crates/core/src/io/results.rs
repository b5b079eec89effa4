use std::io::Write;
use std::path::Path;

use super::write_file;
use crate::error::Result;
use crate::infotheory::{EvalResult, MiCurve};

/// MI curve as `delay_ms,mi_bits`.
pub fn write_curve_csv(path: &Path, curve: &MiCurve, frame_rate: f64) -> Result<()> {
    let ms_per_frame = 1000.0 / frame_rate;
    write_file(path, |out| {
        writeln!(out, "delay_ms,mi_bits")?;
        for p in &curve.points {
            writeln!(out, "{},{}", p.delay_frames as f64 * ms_per_frame, p.mi_bits)?;
        }
        Ok(())
    })
}

pub fn write_eval_json(path: &Path, result: &EvalResult) -> Result<()> {
    super::write_json(path, result)
}
