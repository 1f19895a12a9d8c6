//! Parameter grids and sweeps with per-point failure records.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// `start, start + step, ...` up to `stop` (inclusive within `1e-9 step`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn points(&self) -> CliResult<Vec<f64>> {
        let GridSpec { start, stop, step } = *self;
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::Usage("grid bounds and step must be finite".into()));
        }
        if step <= 0.0 {
            return Err(CliError::Usage(format!("grid step {step} must be positive")));
        }
        if stop < start {
            return Err(CliError::Usage(format!("empty grid: stop {stop} is below start {start}")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize;
        Ok((0..=count).map(|k| start + k as f64 * step).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint<T> {
    pub x: f64,
    pub outcome: Result<T, String>,
}

/// Evaluates `f` at every grid point, in parallel, keeping grid order. A
/// failing point is recorded and the sweep continues.
pub fn sweep<T, F>(grid: &GridSpec, f: F) -> CliResult<Vec<SweepPoint<T>>>
where
    T: Send,
    F: Fn(f64) -> j1j2_core::Result<T> + Sync,
{
    let points = grid.points()?;
    Ok(points
        .into_par_iter()
        .map(|x| SweepPoint { x, outcome: f(x).map_err(|e| e.to_string()) })
        .collect())
}

/// Splits a sweep into successes and `(x, message)` failures.
pub fn partition<T>(points: Vec<SweepPoint<T>>) -> (Vec<(f64, T)>, Vec<(f64, String)>) {
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for p in points {
        match p.outcome {
            Ok(v) => ok.push((p.x, v)),
            Err(e) => failed.push((p.x, e)),
        }
    }
    (ok, failed)
}
