//! Ground-state energy per site in the thermodynamic limit.

use std::f64::consts::PI;

use super::kernel::{series_cutoff, sinh_ratio};
use super::ThermoCouplings;
use crate::{quad, ModelParams, Result};

/// `e_g = lim E_0 / 2N`.
///
/// Real eta: `cos(eta)[cosh^2(2b) - cos(2 eta)] / (2 sin^2 eta) - [cosh(4b) - cos(2 eta)] / sin(eta)
/// * int sinh((pi - eta) w) cos^2(2 b w) / (sinh(pi w) cosh(eta w)) dw`, the
/// integral by adaptive quadrature. Imaginary eta: the analogous series over
/// integer `w`, truncated at [`series_cutoff`].
pub fn ground_energy_density(p: &ModelParams) -> Result<f64> {
    match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { eta, b } => {
            let integrand = |w: f64| {
                let c = (2.0 * b * w).cos();
                sinh_ratio(PI - eta, PI, w) * c * c / (eta * w).cosh()
            };
            // even integrand
            let integral = 2.0 * quad::integrate_half_line(integrand, quad::DEFAULT_RTOL)?;
            let c2b = (2.0 * b).cosh();
            let head = eta.cos() * (c2b * c2b - (2.0 * eta).cos()) / (2.0 * eta.sin().powi(2));
            Ok(head - ((4.0 * b).cosh() - (2.0 * eta).cos()) / eta.sin() * integral)
        }
        ThermoCouplings::ImagEta { gamma, a } => {
            let omega = series_cutoff(gamma);
            let mut sum = 0.0;
            for w in -omega..=omega {
                let wf = w as f64;
                let c = (2.0 * a * wf).cos();
                sum += c * c * (-gamma * wf.abs()).exp() / (gamma * wf).cosh();
            }
            let c2a = (2.0 * a).cos();
            let head = gamma.cosh() * ((2.0 * gamma).cosh() - c2a * c2a) / (2.0 * gamma.sinh().powi(2));
            Ok(head + ((4.0 * a).cos() - (2.0 * gamma).cosh()) / gamma.sinh() * sum)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::thermo::{kernel_a, rho_ground};

    /// `e_g` written as the head term minus the energy kernel integrated against
    /// the closed-form density in rapidity space.
    fn rapidity_space(p: &ModelParams) -> f64 {
        let (eta, b) = (p.anisotropy, p.inhomogeneity);
        let f = |u: f64| {
            (kernel_a(1, u + 2.0 * b, p).unwrap() + kernel_a(1, u - 2.0 * b, p).unwrap()) * rho_ground(u, p).unwrap()
        };
        let integral = quad::integrate_real_line(f, 1e-12).unwrap();
        let c2b = (2.0 * b).cosh();
        let head = eta.cos() * (c2b * c2b - (2.0 * eta).cos()) / (2.0 * eta.sin().powi(2));
        head - ((4.0 * b).cosh() - (2.0 * eta).cos()) / eta.sin() * 2.0 * PI * integral
    }

    #[test]
    fn frequency_and_rapidity_forms_agree() {
        for (eta, b) in [(1.0, 1.0), (0.5, 0.3), (2.0, 0.0), (1.0, 2.0)] {
            let p = ModelParams::real_eta(4, eta, b).unwrap();
            let x = ground_energy_density(&p).unwrap();
            let y = rapidity_space(&p);
            assert!((x - y).abs() < 1e-8 * x.abs().max(1.0), "{eta} {b}: {x} {y}");
        }
    }

    #[test]
    fn isotropic_heisenberg_limit() {
        // eta -> 0 with b = 0 approaches 1 - 4 ln 2 per site in these units
        let p = ModelParams::real_eta(4, 1e-3, 0.0).unwrap();
        let e = ground_energy_density(&p).unwrap();
        assert!((e - (1.0 - 4.0 * 2f64.ln())).abs() < 1e-4, "{e}");
    }

    #[test]
    fn series_truncation_is_converged() {
        let p = ModelParams::imag_eta(4, 1.0, 1.0).unwrap();
        let e = ground_energy_density(&p).unwrap();
        let omega = series_cutoff(1.0);
        let tail: f64 = (omega + 1..omega + 200).map(|w| 2.0 * (-(w as f64)).exp() / (w as f64).cosh()).sum();
        assert!(tail < 1e-12);
        assert!(e.is_finite());
    }
}
