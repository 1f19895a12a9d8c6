//! Result records: the JSON envelope and the CSV tables.

use std::io::Write;

use j1j2_core::bethe::BetheRecord;
use j1j2_core::spectrum::Level;
use serde::{Deserialize, Serialize};

use crate::args::RunConfig;
use crate::error::CliResult;

/// Bumped whenever a payload or the envelope changes shape.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema_version: u32,
    pub command: String,
    pub params: RunConfig,
    pub payload: Payload,
    /// Seconds since the Unix epoch at which the record was created.
    pub timestamp: u64,
}

impl ResultRecord {
    pub fn new(params: RunConfig, payload: Payload) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self { schema_version: SCHEMA_VERSION, command: params.command.clone(), params, payload, timestamp }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub index: usize,
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub u: f64,
    pub rho: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionRow {
    pub u_r: f64,
    pub u_s: f64,
    pub k: f64,
    pub delta_e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub a: f64,
    pub gap: f64,
    pub branch: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealityRow {
    pub a: f64,
    pub all_real: bool,
    pub relative_imag: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFailure {
    pub x: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Verify {
        checks: Vec<CheckRow>,
    },
    Spectrum {
        rows: Vec<SpectrumRow>,
        levels: Vec<Level>,
        all_real: bool,
    },
    Bethe {
        solutions: Vec<BetheRecord>,
        /// Fraction of ED levels reached by a Bethe energy.
        coverage: Option<f64>,
    },
    Density {
        rows: Vec<DensityRow>,
        normalization: f64,
        energy_density: f64,
    },
    Dispersion {
        rows: Vec<DispersionRow>,
        min_delta_e: f64,
        arches: usize,
    },
    Gap {
        rows: Vec<GapRow>,
        failures: Vec<PointFailure>,
    },
    Reality {
        rows: Vec<RealityRow>,
        intervals: Vec<(f64, f64)>,
        predicted: Vec<(f64, f64)>,
        failures: Vec<PointFailure>,
    },
}

/// Twelve significant digits.
pub fn fmt_num(x: f64) -> String {
    format!("{x:.11e}")
}

impl Payload {
    /// Writes the payload as CSV with a header row.
    pub fn write_csv<W: Write>(&self, sink: W) -> CliResult<()> {
        let mut w = csv::Writer::from_writer(sink);
        match self {
            Payload::Verify { checks } => {
                w.write_record(["check", "residual", "threshold", "pass"])?;
                for c in checks {
                    w.write_record([c.check.clone(), fmt_num(c.residual), fmt_num(c.threshold), c.pass.to_string()])?;
                }
            }
            Payload::Spectrum { rows, .. } => {
                w.write_record(["index", "re", "im", "multiplicity"])?;
                for r in rows {
                    w.write_record([r.index.to_string(), fmt_num(r.re), fmt_num(r.im), r.multiplicity.to_string()])?;
                }
            }
            Payload::Bethe { solutions, .. } => {
                w.write_record(["solution", "M", "root_index", "re", "im", "residual", "energy_re", "energy_im"])?;
                for (k, s) in solutions.iter().enumerate() {
                    let tail = [fmt_num(s.residual), fmt_num(s.energy_re), fmt_num(s.energy_im)];
                    if s.m == 0 {
                        let head = [k.to_string(), "0".into(), String::new(), String::new(), String::new()];
                        w.write_record(head.iter().chain(tail.iter()))?;
                    }
                    for (j, (re, im)) in s.roots_re.iter().zip(&s.roots_im).enumerate() {
                        let head = [k.to_string(), s.m.to_string(), j.to_string(), fmt_num(*re), fmt_num(*im)];
                        w.write_record(head.iter().chain(tail.iter()))?;
                    }
                }
            }
            Payload::Density { rows, .. } => {
                w.write_record(["u", "rho"])?;
                for r in rows {
                    w.write_record([fmt_num(r.u), fmt_num(r.rho)])?;
                }
            }
            Payload::Dispersion { rows, .. } => {
                w.write_record(["u_r", "u_s", "K", "dE"])?;
                for r in rows {
                    w.write_record([fmt_num(r.u_r), fmt_num(r.u_s), fmt_num(r.k), fmt_num(r.delta_e)])?;
                }
            }
            Payload::Gap { rows, .. } => {
                w.write_record(["a", "gap", "branch"])?;
                for r in rows {
                    w.write_record([fmt_num(r.a), fmt_num(r.gap), r.branch.clone()])?;
                }
            }
            Payload::Reality { rows, .. } => {
                w.write_record(["a", "all_real", "relative_imag"])?;
                for r in rows {
                    w.write_record([fmt_num(r.a), r.all_real.to_string(), fmt_num(r.relative_imag)])?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_num(-100.43040119), "-1.00430401190e2");
        assert_eq!(fmt_num(0.0), "0.00000000000e0");
        let x = 1.0 / 3.0;
        let back: f64 = fmt_num(x).parse().unwrap();
        assert!((back - x).abs() < 1e-12);
    }

    #[test]
    fn gap_csv_has_header_and_rows() {
        let p = Payload::Gap {
            rows: vec![GapRow { a: 0.5, gap: 1.25, branch: "outer".into() }],
            failures: vec![],
        };
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a,gap,branch\n5.00000000000e-1,1.25000000000e0,outer\n");
    }
}
