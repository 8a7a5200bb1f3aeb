//! File formats: step traces (JSON, CSV), state files, Clebsch-Gordan
//! tables, and Q-function grids (CSV, binary PGM).
//!
//! Floating-point values are written with 17 significant digits, which is
//! enough for every `f64` to read back bit-for-bit.

use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::ser::Formatter;

use crate::basis::SymmetrizedBasis;
use crate::coherent::QGrid;
use crate::error::{format, Error, Result};
use crate::metrics::StepTrace;
use crate::statevector::StateVector;

/// `v` with 17 significant digits in scientific notation.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// JSON formatter that writes every float through [`fmt17`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

pub fn to_json_writer<T: Serialize, W: Write>(value: &T, mut writer: W) -> Result<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut writer, SigDigits);
    value.serialize(&mut ser)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn write_trace_json<W: Write>(trace: &StepTrace, writer: W) -> Result<()> {
    to_json_writer(trace, writer)
}

pub fn read_trace_json<R: Read>(reader: R) -> Result<StepTrace> {
    let trace: StepTrace = serde_json::from_reader(reader)?;
    if trace.steps.iter().enumerate().any(|(i, s)| s.index != i) {
        return format("trace step indices are not contiguous from 0");
    }
    Ok(trace)
}

/// `index,label,t1,t2`. `P(j, m)` data is not carried.
pub fn write_trace_csv<W: Write>(trace: &StepTrace, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["index", "label", "t1", "t2"])?;
    for s in &trace.steps {
        w.write_record([s.index.to_string(), s.label.clone(), fmt17(s.t1), fmt17(s.t2)])?;
    }
    w.flush()?;
    Ok(())
}

/// Parses a state file: `2^n` lines of `re im`. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_state(text: &str) -> Result<StateVector> {
    let mut amps = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut next = || -> Result<f64> {
            let tok = fields
                .next()
                .ok_or_else(|| Error::Format(format!("line {}: expected 're im'", lineno + 1)))?;
            tok.parse::<f64>()
                .map_err(|e| Error::Format(format!("line {}: {tok:?}: {e}", lineno + 1)))
        };
        let (re, im) = (next()?, next()?);
        if fields.next().is_some() {
            return format(format!("line {}: trailing fields", lineno + 1));
        }
        amps.push(Complex64::new(re, im));
    }
    StateVector::from_amplitudes(amps)
}

pub fn read_state_file(path: impl AsRef<Path>) -> Result<StateVector> {
    parse_state(&fs::read_to_string(path)?)
}

pub fn write_state<W: Write>(s: &StateVector, mut writer: W) -> Result<()> {
    for a in s.amplitudes() {
        writeln!(writer, "{} {}", fmt17(a.re), fmt17(a.im))?;
    }
    Ok(())
}

/// `j,m,alpha,x,coefficient`, in the order of [`SymmetrizedBasis::cg_table`].
pub fn write_cg_csv<W: Write>(basis: &SymmetrizedBasis, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["j", "m", "alpha", "x", "coefficient"])?;
    for row in basis.cg_table() {
        w.write_record([
            row.j.value().to_string(),
            row.m.value().to_string(),
            row.alpha.to_string(),
            row.x.to_string(),
            fmt17(row.coefficient),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `theta,phi,q`, row-major over `θ`.
pub fn write_q_csv<W: Write>(grid: &QGrid, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["theta", "phi", "q"])?;
    for (theta, row) in grid.thetas.iter().zip(&grid.values) {
        for (phi, q) in grid.phis.iter().zip(row) {
            w.write_record([fmt17(*theta), fmt17(*phi), fmt17(*q)])?;
        }
    }
    w.flush()?;
    Ok(())
}

/// 8-bit binary PGM: one row per `θ` sample (north pole first), one column
/// per `φ` sample. `Q = 1` is black and `Q = 0` white. With `normalize`,
/// the grid maximum maps to black instead.
pub fn write_q_pgm<W: Write>(grid: &QGrid, normalize: bool, mut writer: W) -> Result<()> {
    let (w, h) = (grid.phis.len(), grid.thetas.len());
    let peak = if normalize {
        grid.values.iter().flatten().copied().fold(0.0f64, f64::max)
    } else {
        1.0
    };
    let scale = if peak > 0.0 { peak.recip() } else { 1.0 };
    write!(writer, "P5\n{w} {h}\n255\n")?;
    let mut bytes = Vec::with_capacity(w * h);
    for row in &grid.values {
        for q in row {
            let shade = (1.0 - (q * scale).clamp(0.0, 1.0)) * 255.0;
            bytes.push(shade.round() as u8);
        }
    }
    writer.write_all(&bytes)?;
    Ok(())
}
