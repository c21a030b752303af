use std::io::Write;
use std::path::Path;

use nalgebra::DVector;

use super::sampling::Approximant;
use super::search::SearchTrace;
use crate::error::{Error, Result};
use crate::network::LayerwiseNetwork;

/// One row of a function sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub f: f64,
    pub g: f64,
    pub abs_err: f64,
}

/// Evaluates a scalar-input, scalar-output pair at `xs`.
pub fn emit_function_sweep(full: &LayerwiseNetwork, approx: &dyn Approximant, xs: &[f64]) -> Result<Vec<SweepRow>> {
    if full.input_dim() != 1 || full.output_dim() != 1 {
        return Err(Error::InvalidOptions("function sweeps need a scalar input and output".into()));
    }
    xs.iter()
        .map(|&x| {
            let p = DVector::from_element(1, x);
            let f = full.output(&p)?[0];
            let g = approx.output(&p)?[0];
            Ok(SweepRow { x, f, g, abs_err: (f - g).abs() })
        })
        .collect()
}

/// Writes `x,f,g,abs_err`.
pub fn write_function_sweep(rows: &[SweepRow], path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "x,f,g,abs_err")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.x, r.f, r.g, r.abs_err)?;
    }
    out.flush()?;
    Ok(())
}

/// `(m1, bound, empirical)` rows from a trace; `m1` is the total reduced
/// width. Iterations without a certificate are skipped.
pub fn emit_error_curve(trace: &SearchTrace) -> Vec<(usize, f64, f64)> {
    trace
        .records
        .iter()
        .filter_map(|r| Some((r.partition.iter().sum(), r.p?, r.q?)))
        .collect()
}

/// Writes `m1,bound,empirical`.
pub fn write_error_curve(rows: &[(usize, f64, f64)], path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "m1,bound,empirical")?;
    for (m, p, q) in rows {
        writeln!(out, "{m},{p},{q}")?;
    }
    out.flush()?;
    Ok(())
}
