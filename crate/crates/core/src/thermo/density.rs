//! Ground-state root density and its integral equation.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::excitation::hole_window;
use super::kernel::{kernel_a, series_cutoff};
use super::ThermoCouplings;
use crate::{quad, Error, ModelParams, Regime, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub regime: Regime,
    pub grid: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_hole: Vec<f64>,
    pub delta_rho: Option<Vec<f64>>,
}

/// `rho~_g(w) = cos(2 b w) / (2 cosh(eta w))`, or with `(a, gamma)`.
pub fn rho_ground_transform(w: f64, p: &ModelParams) -> Result<f64> {
    Ok(match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { eta, b } => (2.0 * b * w).cos() / (2.0 * (eta * w).cosh()),
        ThermoCouplings::ImagEta { gamma, a } => (2.0 * a * w).cos() / (2.0 * (gamma * w).cosh()),
    })
}

/// Ground-state root density: closed form for real eta, Fourier series
/// truncated at [`series_cutoff`] for imaginary eta.
pub fn rho_ground(u: f64, p: &ModelParams) -> Result<f64> {
    Ok(match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { eta, b } => {
            let s = |x: f64| 1.0 / (PI * x / (2.0 * eta)).cosh();
            (s(u + 2.0 * b) + s(u - 2.0 * b)) / (8.0 * eta)
        }
        ThermoCouplings::ImagEta { gamma, a } => {
            let omega = series_cutoff(gamma);
            // terms w and -w combine into 2 cos(u w)
            let mut s = 0.5;
            for w in 1..=omega {
                let wf = w as f64;
                s += 2.0 * (u * wf).cos() * (2.0 * a * wf).cos() / (2.0 * (gamma * wf).cosh());
            }
            s / (2.0 * PI)
        }
    })
}

/// `int rho_g` over the real line (real eta) or `(-pi, pi]`.
pub fn density_normalization(p: &ModelParams) -> Result<f64> {
    let f = |u: f64| rho_ground(u, p).unwrap_or(f64::NAN);
    match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { .. } => quad::integrate_real_line(f, 1e-13),
        ThermoCouplings::ImagEta { .. } => quad::integrate(f, -PI, PI, 1e-13),
    }
}

/// Ground-state density on `n_points` grid points of the hole window.
pub fn ground_density_profile(p: &ModelParams, n_points: usize) -> Result<DensityProfile> {
    if n_points < 2 {
        return Err(Error::InvalidParams("density profile needs at least two points".into()));
    }
    let (lo, hi) = hole_window(p)?;
    let grid: Vec<f64> = (0..n_points).map(|k| lo + (hi - lo) * k as f64 / (n_points - 1) as f64).collect();
    let rho = grid.iter().map(|&u| rho_ground(u, p)).collect::<Result<Vec<_>>>()?;
    Ok(DensityProfile { regime: p.regime, rho_hole: vec![0.0; grid.len()], grid, rho, delta_rho: None })
}

/// Result of discretizing `rho(u) + int a_2(u - v) rho(v) dv = [a_1(u + 2b) + a_1(u - 2b)] / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegralEquationCheck {
    pub nodes: usize,
    /// Largest defect of the closed-form density in the discrete equation.
    pub residual: f64,
    /// Largest difference between the discrete solution and the closed form.
    pub solution_deviation: f64,
}

struct Discretization {
    nodes: Vec<f64>,
    weight: f64,
    kernel: DMatrix<f64>,
    source: DVector<f64>,
}

/// Trapezoid (Nystrom) discretization on `[-half_width, half_width]` with
/// step `h` for real eta; on the periodic interval `[-pi, pi)` with
/// `round(2 pi / h)` nodes for imaginary eta.
fn discretize(p: &ModelParams, half_width: f64, h: f64) -> Result<Discretization> {
    if !(h > 0.0 && half_width > 0.0) {
        return Err(Error::InvalidParams("grid step and width must be positive".into()));
    }
    let (nodes, weight, shift) = match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { b, .. } => {
            let n = (2.0 * half_width / h).round() as usize + 1;
            let nodes: Vec<f64> = (0..n).map(|k| -half_width + k as f64 * h).collect();
            (nodes, h, 2.0 * b)
        }
        ThermoCouplings::ImagEta { a, .. } => {
            let n = (2.0 * PI / h).round() as usize;
            let w = 2.0 * PI / n as f64;
            ((0..n).map(|k| -PI + k as f64 * w).collect(), w, 2.0 * a)
        }
    };
    let n = nodes.len();
    let mut kernel = DMatrix::zeros(n, n);
    let mut source = DVector::zeros(n);
    for i in 0..n {
        source[i] = 0.5 * (kernel_a(1, nodes[i] + shift, p)? + kernel_a(1, nodes[i] - shift, p)?);
        for k in 0..n {
            let end = p.regime == Regime::RealEtaHermitian && (k == 0 || k == n - 1);
            let w = if end { weight / 2.0 } else { weight };
            kernel[(i, k)] = w * kernel_a(2, nodes[i] - nodes[k], p)?;
        }
    }
    Ok(Discretization { nodes, weight, kernel, source })
}

/// Plugs the closed-form density into the discretized integral equation and
/// also solves the discrete system.
pub fn integral_equation_residual(p: &ModelParams, half_width: f64, h: f64) -> Result<IntegralEquationCheck> {
    let d = discretize(p, half_width, h)?;
    let closed = DVector::from_iterator(d.nodes.len(), d.nodes.iter().map(|&u| rho_ground(u, p).unwrap_or(f64::NAN)));
    let defect = &closed + &d.kernel * &closed - &d.source;
    let solved = solve_discrete(&d)?;
    Ok(IntegralEquationCheck {
        nodes: d.nodes.len(),
        residual: defect.amax(),
        solution_deviation: (&solved - &closed).amax(),
    })
}

fn solve_discrete(d: &Discretization) -> Result<DVector<f64>> {
    let n = d.nodes.len();
    let system = DMatrix::identity(n, n) + &d.kernel;
    system
        .lu()
        .solve(&d.source)
        .ok_or_else(|| Error::NoConvergence(format!("singular discretized integral equation (weight {})", d.weight)))
}

/// Discrete solution of the integral equation as `(nodes, rho)`.
pub fn solve_integral_equation(p: &ModelParams, half_width: f64, h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = discretize(p, half_width, h)?;
    let rho = solve_discrete(&d)?;
    Ok((d.nodes, rho.iter().copied().collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_value_at_origin() {
        let p = ModelParams::real_eta(4, 1.0, 1.0).unwrap();
        let v = rho_ground(0.0, &p).unwrap();
        assert!((v - 1.0 / PI.cosh() / 4.0).abs() < 1e-16);
    }

    #[test]
    fn normalization_both_regimes() {
        for p in [
            ModelParams::real_eta(4, 1.0, 1.0).unwrap(),
            ModelParams::real_eta(4, 2.5, 0.3).unwrap(),
            ModelParams::imag_eta(4, 1.0, 1.0).unwrap(),
            ModelParams::imag_eta(4, 0.3, 0.2).unwrap(),
        ] {
            assert!((density_normalization(&p).unwrap() - 0.5).abs() < 1e-8, "{p}");
        }
    }

    #[test]
    fn symmetric_and_nonnegative() {
        for p in [ModelParams::real_eta(4, 1.0, 2.0).unwrap(), ModelParams::imag_eta(4, 1.0, 1.0).unwrap()] {
            for k in 0..40 {
                let u = -3.0 + 0.15 * k as f64;
                let (x, y) = (rho_ground(u, &p).unwrap(), rho_ground(-u, &p).unwrap());
                assert!((x - y).abs() < 1e-15 && x >= 0.0);
            }
        }
    }

    #[test]
    fn quarter_pi_equal_minima() {
        let p = ModelParams::imag_eta(4, 1.0, PI / 4.0).unwrap();
        assert!((rho_ground(PI, &p).unwrap() - rho_ground(0.0, &p).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn imaginary_series_matches_its_transform() {
        let p = ModelParams::imag_eta(4, 0.7, 0.9).unwrap();
        for w in 0..4 {
            let wf = w as f64;
            let v = quad::integrate(|u| rho_ground(u, &p).unwrap() * (wf * u).cos(), -PI, PI, 1e-12).unwrap();
            assert!((v - rho_ground_transform(wf, &p).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn integral_equation_small_grid() {
        let p = ModelParams::real_eta(4, 1.0, 1.0).unwrap();
        let check = integral_equation_residual(&p, 25.0, 0.1).unwrap();
        assert!(check.residual < 1e-6, "{check:?}");
        assert!(check.solution_deviation < 1e-6, "{check:?}");
        let p = ModelParams::imag_eta(4, 1.0, 1.0).unwrap();
        let check = integral_equation_residual(&p, PI, 0.05).unwrap();
        assert!(check.residual < 1e-10, "{check:?}");
    }

    #[test]
    fn profile_shape() {
        let p = ModelParams::real_eta(4, 1.0, 1.0).unwrap();
        let prof = ground_density_profile(&p, 101).unwrap();
        assert_eq!(prof.grid.len(), 101);
        assert!(prof.rho_hole.iter().all(|&x| x == 0.0));
        assert!(ground_density_profile(&p, 1).is_err());
    }
}
