//! The kernels `a_n` and their Fourier transforms.

use std::f64::consts::PI;

use super::ThermoCouplings;
use crate::{Error, ModelParams, Result};

/// Fourier cut-off `ceil(28 / gamma)`, leaving a tail below `1e-12`.
pub fn series_cutoff(gamma: f64) -> i64 {
    (28.0 / gamma).ceil() as i64
}

/// `sinh(x w) / sinh(y w)` for `y > 0`, without overflow; `x / y` at `w = 0`.
pub fn sinh_ratio(x: f64, y: f64, w: f64) -> f64 {
    if w == 0.0 {
        return x / y;
    }
    let w_abs = w.abs();
    let sign = x.signum();
    let xa = x.abs();
    // sinh(xa w)/sinh(y w) = e^{(xa - y) w} (1 - e^{-2 xa w}) / (1 - e^{-2 y w})
    sign * ((xa - y) * w_abs).exp() * (-(-2.0 * xa * w_abs).exp_m1()) / (-(-2.0 * y * w_abs).exp_m1())
}

/// `a_n(x)`: `sin(n eta) / (cosh x - cos(n eta)) / 2 pi` for real `eta`,
/// `sinh(n gamma) / (cosh(n gamma) - cos x) / 2 pi` for `eta = i gamma`.
pub fn kernel_a(n: u32, x: f64, p: &ModelParams) -> Result<f64> {
    let nf = n as f64;
    match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { eta, .. } => {
            let den = x.cosh() - (nf * eta).cos();
            if den.abs() < 1e-14 {
                return Err(Error::KernelPole(format!("cosh({x}) = cos({n} eta)")));
            }
            Ok((nf * eta).sin() / den / (2.0 * PI))
        }
        ThermoCouplings::ImagEta { gamma, .. } => {
            let den = (nf * gamma).cosh() - x.cos();
            if den.abs() < 1e-14 {
                return Err(Error::KernelPole(format!("cos({x}) = cosh({n} gamma)")));
            }
            Ok((nf * gamma).sinh() / den / (2.0 * PI))
        }
    }
}

/// `a~_n(w)`: `sinh(pi w - 2 delta_n pi w) / sinh(pi w)` with `delta_n` the
/// fractional part of `n eta / 2 pi` (real eta), `e^{-n gamma |w|}` otherwise.
pub fn kernel_a_transform(n: u32, w: f64, p: &ModelParams) -> Result<f64> {
    let nf = n as f64;
    Ok(match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { eta, .. } => {
            let t = nf * eta / (2.0 * PI);
            let delta = t - t.floor();
            sinh_ratio(PI - 2.0 * delta * PI, PI, w)
        }
        ThermoCouplings::ImagEta { gamma, .. } => (-nf * gamma * w.abs()).exp(),
    })
}
