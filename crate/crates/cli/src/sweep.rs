//! One-parameter sweeps written as CSV.

use crate::error::CliError;
use crate::params::Params;
use crate::registry::{Entry, Output};
use rayon::prelude::*;
use std::io::Write;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    pub geometric: bool,
}

impl SweepSpec {
    /// `steps` points from `from` to `to` inclusive; none when `steps` is zero.
    pub fn grid(&self) -> Result<Vec<f64>, CliError> {
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::usage("sweep bounds must be finite"));
        }
        if self.geometric && !(self.from > 0.0 && self.to > 0.0) {
            return Err(CliError::usage("a geometric sweep needs positive bounds"));
        }
        let n = self.steps;
        let at = |k: usize| {
            if n == 1 {
                return self.from;
            }
            if k == n - 1 {
                return self.to;
            }
            let f = k as f64 / (n - 1) as f64;
            if self.geometric {
                self.from * (self.to / self.from).powf(f)
            } else {
                self.from + f * (self.to - self.from)
            }
        };
        Ok((0..n).map(at).collect())
    }
}

/// Evaluate `entry` at every grid point; rows come back in grid order.
pub fn sweep(entry: &Entry, fixed: &Params, spec: &SweepSpec, tol: f64) -> Result<Vec<(f64, Output)>, CliError> {
    let grid = spec.grid()?;
    grid.par_iter()
        .map(|&x| {
            let mut p = fixed.clone();
            p.set(&spec.param, x.to_string());
            Ok((x, entry.call(p, tol)?))
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[(f64, Output)]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["parameter", "value_re", "value_im", "err_bound"])?;
    for (x, o) in rows {
        w.serialize((x, o.value.re, o.value.im, o.err_bound))?;
    }
    w.flush()?;
    Ok(())
}
