//! Excitation gap of the imaginary-eta regime.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::kernel::series_cutoff;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapBranch {
    /// `a` in `[0, pi/4] U [3pi/4, pi]`: both holes at `pi`.
    Outer,
    /// `a` in `(pi/4, 3pi/4)`: both holes at `0`.
    Inner,
}

impl GapBranch {
    pub fn for_a(a: f64) -> Self {
        if a > PI / 4.0 && a < 3.0 * PI / 4.0 {
            Self::Inner
        } else {
            Self::Outer
        }
    }
}

impl std::fmt::Display for GapBranch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Outer => "outer",
            Self::Inner => "inner",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub a: f64,
    pub gamma: f64,
    pub gap: f64,
    pub branch: GapBranch,
}

/// `4[cosh(2 gamma) - cos(4a)] / sinh(gamma) * sum_w s^w cos(2 a w) / (2 cosh(gamma w))`
/// with `s = -1` on the outer branch and `s = 1` on the inner one.
pub fn gap_branch_value(a: f64, gamma: f64, branch: GapBranch) -> f64 {
    let omega = series_cutoff(gamma);
    let mut sum = 0.0;
    for w in -omega..=omega {
        let wf = w as f64;
        let sign = match branch {
            GapBranch::Outer if w % 2 != 0 => -1.0,
            _ => 1.0,
        };
        sum += sign * (2.0 * a * wf).cos() / (2.0 * (gamma * wf).cosh());
    }
    4.0 * ((2.0 * gamma).cosh() - (4.0 * a).cos()) / gamma.sinh() * sum
}

pub fn gap(a: f64, gamma: f64) -> Result<GapResult> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::InvalidParams(format!("gamma = {gamma} must be positive")));
    }
    if !(0.0..=PI).contains(&a) {
        return Err(Error::InvalidParams(format!("a = {a} must lie in [0, pi]")));
    }
    let branch = GapBranch::for_a(a);
    Ok(GapResult { a, gamma, gap: gap_branch_value(a, gamma, branch), branch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{single_hole_energy, ThermoCouplings};
    use crate::ModelParams;

    #[test]
    fn gap_is_two_holes_at_the_density_minimum() {
        for a in [0.2, 1.0, 2.0, 2.9] {
            let p = ModelParams::imag_eta(4, 1.0, a).unwrap();
            let g = gap(a, 1.0).unwrap();
            let u = if g.branch == GapBranch::Outer { PI } else { 0.0 };
            let two = 2.0 * single_hole_energy(u, &p).unwrap();
            assert!((g.gap - two).abs() < 1e-10 * two, "{a}");
            assert!(ThermoCouplings::from_params(&p).is_ok());
        }
    }

    #[test]
    fn symmetry_and_crossover() {
        for a in [0.1, 0.33, 0.7] {
            let g = |x: f64| gap(x, 1.0).unwrap().gap;
            for b in [PI / 2.0 - a, PI / 2.0 + a, PI - a] {
                assert!((g(a) - g(b)).abs() < 1e-10, "{a} {b}");
            }
        }
        for x in [PI / 4.0, 3.0 * PI / 4.0] {
            let d = gap_branch_value(x, 1.0, GapBranch::Outer) - gap_branch_value(x, 1.0, GapBranch::Inner);
            assert!(d.abs() < 1e-10);
        }
    }

    #[test]
    fn ends_and_middle_equal_and_positive() {
        let g0 = gap(0.0, 1.0).unwrap().gap;
        assert!(g0 > 0.0);
        assert!((g0 - gap(PI / 2.0, 1.0).unwrap().gap).abs() < 1e-10);
        assert!((g0 - gap(PI, 1.0).unwrap().gap).abs() < 1e-10);
        assert!(gap(-0.1, 1.0).is_err());
        assert!(gap(0.1, 0.0).is_err());
    }

    proptest::proptest! {
        #[test]
        fn gap_symmetric_and_positive(a in 0.0f64..(PI / 2.0), gamma in 0.2f64..3.0) {
            let g = |x: f64| gap(x, gamma).unwrap().gap;
            let g0 = g(a);
            proptest::prop_assert!(g0 > 0.0);
            for b in [PI / 2.0 - a, PI / 2.0 + a, PI - a] {
                proptest::prop_assert!((g0 - g(b)).abs() < 1e-10 * g0.max(1.0));
            }
        }
    }
}
