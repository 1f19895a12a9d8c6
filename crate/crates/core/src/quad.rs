//! Adaptive quadrature on finite intervals and the half line.
//!
//! Built on the tanh-sinh rule of the `quadrature` crate, with recursive
//! bisection whenever its error estimate misses the target. The half line
//! `[0, inf)` is mapped onto `[0, 1)` by `x = t / (1 - t)`, which keeps an
//! exponentially decaying integrand smooth at `t = 1`.

use crate::{Error, Result};

/// Default relative tolerance.
pub const DEFAULT_RTOL: f64 = 1e-10;
const MAX_DEPTH: usize = 24;

fn finite_abs(f: &dyn Fn(f64) -> f64, a: f64, b: f64, abs_tol: f64, depth: usize) -> Result<f64> {
    let out = quadrature::double_exponential::integrate(f, a, b, abs_tol);
    // below this the estimate is rounding noise
    let floor = 16.0 * f64::EPSILON * out.integral.abs();
    if out.error_estimate <= abs_tol.max(floor) {
        return Ok(out.integral);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NoConvergence(format!(
            "quadrature on [{a}, {b}] (error estimate {:e})",
            out.error_estimate
        )));
    }
    let mid = 0.5 * (a + b);
    Ok(finite_abs(f, a, mid, abs_tol / 2.0, depth + 1)? + finite_abs(f, mid, b, abs_tol / 2.0, depth + 1)?)
}

/// `int_a^b f` to tolerance `rtol * int_a^b |f|`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rtol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParams("finite bounds required".into()));
    }
    let f: &dyn Fn(f64) -> f64 = &f;
    // tolerance relative to int |f|, so cancelling integrands stay attainable
    let rough = quadrature::double_exponential::integrate(|x| f(x).abs(), a, b, 1e-6);
    let scale = rough.integral.max(f64::MIN_POSITIVE);
    finite_abs(f, a, b, rtol * scale, 0)
}

/// `int_0^inf f` for an integrand decaying at least exponentially.
pub fn integrate_half_line(f: impl Fn(f64) -> f64, rtol: f64) -> Result<f64> {
    let mapped = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let s = 1.0 - t;
        let v = f(t / s) / (s * s);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(mapped, 0.0, 1.0, rtol)
}

/// `int_{-inf}^{inf} f`.
pub fn integrate_real_line(f: impl Fn(f64) -> f64, rtol: f64) -> Result<f64> {
    integrate_half_line(|x| f(x) + f(-x), rtol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_and_trig() {
        assert!((integrate(|x| x * x, 0.0, 3.0, 1e-12).unwrap() - 9.0).abs() < 1e-11);
        assert!((integrate(f64::sin, 0.0, PI, 1e-12).unwrap() - 2.0).abs() < 1e-11);
        assert_eq!(integrate(f64::sin, 1.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn half_line_exponential() {
        let v = integrate_half_line(|x| (-x).exp(), 1e-12).unwrap();
        assert!((v - 1.0).abs() < 1e-11);
        let v = integrate_half_line(|x| (-0.3 * x).exp(), 1e-12).unwrap();
        assert!((v - 1.0 / 0.3).abs() < 1e-9);
    }

    #[test]
    fn oscillatory_tail() {
        // int_0^inf e^{-x} cos(8x) dx = 1/65
        let v = integrate_half_line(|x| (-x).exp() * (8.0 * x).cos(), 1e-12).unwrap();
        assert!((v - 1.0 / 65.0).abs() < 1e-11, "{v}");
    }

    #[test]
    fn sech_on_the_real_line() {
        let v = integrate_real_line(|x| 1.0 / x.cosh(), 1e-12).unwrap();
        assert!((v - PI).abs() < 1e-11);
    }
}
