//! Two-hole (spinon) excitations: momentum, energy, density shift and
//! dispersion curves.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::density::rho_ground;
use super::kernel::{kernel_a_transform, series_cutoff};
use super::ThermoCouplings;
use crate::{quad, Error, ModelParams, Regime, Result, C64};

/// Hole positions sampled by dispersion curves and density profiles:
/// `[-(2|b| + 12 eta), 2|b| + 12 eta]` for real eta (the density has decayed
/// by about `e^{-6 pi}` at the ends), `[-pi, pi]` for imaginary eta.
pub fn hole_window(p: &ModelParams) -> Result<(f64, f64)> {
    Ok(match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { eta, b } => {
            let w = 2.0 * b.abs() + 12.0 * eta;
            (-w, w)
        }
        ThermoCouplings::ImagEta { .. } => (-PI, PI),
    })
}

/// Maps `k` to `(-pi, pi]`.
fn reduce_momentum(k: f64) -> f64 {
    k - 2.0 * PI * ((k - PI) / (2.0 * PI)).ceil()
}

/// Momentum `2 pi int_u^top rho_g` carried by one hole at `u`, in `[0, pi]`
/// and decreasing in `u` (`top` is `+inf` for real eta, `pi` otherwise).
pub fn hole_momentum(u: f64, p: &ModelParams) -> Result<f64> {
    Ok(match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { eta, b } => {
            (-PI * (u - 2.0 * b) / (2.0 * eta)).exp().atan() + (-PI * (u + 2.0 * b) / (2.0 * eta)).exp().atan()
        }
        ThermoCouplings::ImagEta { gamma, a } => {
            let mut s = (PI - u) / 2.0;
            for w in 1..=series_cutoff(gamma) {
                let wf = w as f64;
                s -= (2.0 * a * wf).cos() * (wf * u).sin() / (wf * (gamma * wf).cosh());
            }
            s
        }
    })
}

/// Total momentum of two holes, reduced to `(-pi, pi]`.
///
/// For imaginary eta this is the frequency sum over `w != 0` plus `pi`, which
/// equals the sum of the two [`hole_momentum`] values.
pub fn spinon_momentum(u_r: f64, u_s: f64, p: &ModelParams) -> Result<f64> {
    let k = match ThermoCouplings::from_params(p)? {
        ThermoCouplings::RealEta { .. } => hole_momentum(u_r, p)? + hole_momentum(u_s, p)?,
        ThermoCouplings::ImagEta { gamma, a } => {
            let i = C64::new(0.0, 1.0);
            let omega = series_cutoff(gamma);
            let mut s = C64::new(0.0, 0.0);
            for w in (-omega..=omega).filter(|&w| w != 0) {
                let wf = w as f64;
                let sign = if w % 2 == 0 { 1.0 } else { -1.0 };
                let bracket = 2.0 * sign - (i * wf * u_r).exp() - (i * wf * u_s).exp();
                s += (2.0 * a * wf).cos() / (2.0 * i * wf * (gamma * wf).cosh()) * bracket;
            }
            s.re + PI - (u_r + u_s) / 2.0
        }
    };
    Ok(reduce_momentum(k))
}

/// `n` hole rapidities in the hole window whose single-hole momenta are
/// `pi (k + 1/2) / n`, found by bisection (clamped to the window ends).
pub fn momentum_uniform_holes(p: &ModelParams, n: usize) -> Result<Vec<f64>> {
    let (lo, hi) = hole_window(p)?;
    (0..n)
        .map(|k| {
            let target = PI * (k as f64 + 0.5) / n as f64;
            let (mut a, mut b) = (lo, hi);
            if hole_momentum(a, p)? <= target {
                return Ok(a);
            }
            if hole_momentum(b, p)? >= target {
                return Ok(b);
            }
            for _ in 0..80 {
                let mid = 0.5 * (a + b);
                if hole_momentum(mid, p)? > target {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            Ok(0.5 * (a + b))
        })
        .collect()
}

/// `eps(u) = c rho_g(u)` with the regime's energy scale `c`.
pub fn single_hole_energy(u: f64, p: &ModelParams) -> Result<f64> {
    Ok(ThermoCouplings::from_params(p)?.hole_energy_scale() * rho_ground(u, p)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoleExcitation {
    pub u_r: f64,
    pub u_s: f64,
    pub k: f64,
    pub delta_e: f64,
    pub eps_r: f64,
    pub eps_s: f64,
}

pub fn spinon_energy(u_r: f64, u_s: f64, p: &ModelParams) -> Result<HoleExcitation> {
    let eps_r = single_hole_energy(u_r, p)?;
    let eps_s = single_hole_energy(u_s, p)?;
    Ok(HoleExcitation { u_r, u_s, k: spinon_momentum(u_r, u_s, p)?, delta_e: eps_r + eps_s, eps_r, eps_s })
}

/// Regular part of `2N delta_rho(u)` for holes at `u_r, u_s`:
/// `J(u - u_r) + J(u - u_s)` with `J~ = a~_2 / (1 + a~_2)`. The full shift
/// also contains `-[delta(u - u_r) + delta(u - u_s)]`.
pub fn delta_rho_regular(u: f64, u_r: f64, u_s: f64, p: &ModelParams) -> Result<f64> {
    let j_tilde = |w: f64| -> f64 {
        let t = kernel_a_transform(2, w, p).unwrap_or(f64::NAN);
        t / (1.0 + t)
    };
    let j = |x: f64| -> Result<f64> {
        match ThermoCouplings::from_params(p)? {
            // poles of J~ lie at |Im w| >= 1/2, so |J(x)| < e^{-|x|/2}
            ThermoCouplings::RealEta { .. } if x.abs() > 90.0 => Ok(0.0),
            ThermoCouplings::RealEta { .. } => {
                Ok(quad::integrate_half_line(|w| j_tilde(w) * (w * x).cos(), 1e-11)? / PI)
            }
            ThermoCouplings::ImagEta { gamma, .. } => {
                let omega = series_cutoff(gamma);
                let mut s = j_tilde(0.0);
                for w in 1..=omega {
                    s += 2.0 * j_tilde(w as f64) * (w as f64 * x).cos();
                }
                Ok(s / (2.0 * PI))
            }
        }
    };
    Ok(j(u - u_r)? + j(u - u_s)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DispersionMode {
    /// Both holes at the same position, `u_r = u_s`.
    Diagonal,
    /// Every unordered pair `u_r <= u_s` of grid points.
    Pairs,
    /// Every unordered pair of holes placed uniformly in single-hole
    /// momentum, so that the upper edge of the two-hole continuum is
    /// resolved evenly in `K`.
    Envelope,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionPoint {
    pub u_r: f64,
    pub u_s: f64,
    pub k: f64,
    pub delta_e: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersionCurve {
    pub regime: Regime,
    pub mode: DispersionMode,
    pub points: Vec<DispersionPoint>,
}

impl DispersionCurve {
    pub fn min_delta_e(&self) -> f64 {
        self.points.iter().map(|q| q.delta_e).fold(f64::INFINITY, f64::min)
    }

    /// Arch count of `delta_e(k)` over `bins` momentum bins (see [`count_arches`]).
    pub fn arches(&self, bins: usize) -> usize {
        let pts: Vec<(f64, f64)> = self.points.iter().map(|q| (q.k, q.delta_e)).collect();
        count_arches(&pts, bins)
    }
}

/// Samples `n_samples` hole positions over [`hole_window`] (for imaginary eta
/// the grid is `(-pi, pi]`) and maps them to `(K, dE)`.
pub fn dispersion_curve(p: &ModelParams, n_samples: usize, mode: DispersionMode) -> Result<DispersionCurve> {
    if n_samples < 2 {
        return Err(Error::InvalidParams("dispersion curve needs at least two samples".into()));
    }
    let (lo, hi) = hole_window(p)?;
    let grid: Vec<f64> = match (mode, p.regime) {
        (DispersionMode::Envelope, _) => momentum_uniform_holes(p, n_samples)?,
        (_, Regime::ImagEtaHermitian) => (1..=n_samples).map(|k| lo + (hi - lo) * k as f64 / n_samples as f64).collect(),
        _ => (0..n_samples).map(|k| lo + (hi - lo) * k as f64 / (n_samples - 1) as f64).collect(),
    };
    let mut points = Vec::new();
    for (i, &u_r) in grid.iter().enumerate() {
        let partners: &[f64] = match mode {
            DispersionMode::Diagonal => std::slice::from_ref(&grid[i]),
            DispersionMode::Pairs | DispersionMode::Envelope => &grid[i..],
        };
        for &u_s in partners {
            let ex = spinon_energy(u_r, u_s, p)?;
            points.push(DispersionPoint { u_r, u_s, k: ex.k, delta_e: ex.delta_e });
        }
    }
    Ok(DispersionCurve { regime: p.regime, mode, points })
}

/// Number of arches (local maxima) of `dE(K)` on the momentum circle.
///
/// Points are binned into `bins` equal bins of `(-pi, pi]`, keeping the
/// largest `dE` per bin (the upper envelope); empty bins are skipped. The
/// circular sequence is scanned from its global minimum and a maximum is
/// counted once the sequence falls `1e-3` of its range below it.
pub fn count_arches(points: &[(f64, f64)], bins: usize) -> usize {
    if points.is_empty() || bins == 0 {
        return 0;
    }
    let mut env = vec![f64::NEG_INFINITY; bins];
    for &(k, e) in points {
        let t = ((k + PI) / (2.0 * PI) * bins as f64).ceil() as isize - 1;
        let idx = t.clamp(0, bins as isize - 1) as usize;
        env[idx] = env[idx].max(e);
    }
    let seq: Vec<f64> = env.into_iter().filter(|x| x.is_finite()).collect();
    let (lo, hi) = seq.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let range = hi - lo;
    if !(range > 0.0) {
        return 0;
    }
    let delta = 1e-3 * range;
    let start = seq.iter().position(|&x| x == lo).unwrap_or(0);
    let n = seq.len();
    let mut count = 0;
    let mut rising = true;
    let mut extreme = lo;
    for step in 1..=n {
        let x = seq[(start + step) % n];
        if rising {
            if x > extreme {
                extreme = x;
            } else if x < extreme - delta {
                count += 1;
                rising = false;
                extreme = x;
            }
        } else if x < extreme {
            extreme = x;
        } else if x > extreme + delta {
            rising = true;
            extreme = x;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn momentum_limits() {
        let p = ModelParams::real_eta(4, 1.0, 0.0).unwrap();
        assert!((spinon_momentum(0.0, 0.0, &p).unwrap() - PI).abs() < 1e-15);
        assert!(spinon_momentum(60.0, 60.0, &p).unwrap().abs() < 1e-12);
        assert_eq!(reduce_momentum(-PI), PI);
        assert!((reduce_momentum(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
    }

    #[test]
    fn momentum_is_twice_the_counted_roots_above_each_hole() {
        for p in [ModelParams::real_eta(4, 1.0, 1.0).unwrap(), ModelParams::imag_eta(4, 1.0, 1.0).unwrap()] {
            let upper = if p.regime == Regime::RealEtaHermitian { 60.0 } else { PI };
            for (ur, us) in [(-0.7, 0.4), (1.1, 2.3), (-2.5, -0.1)] {
                let f = |u: f64| rho_ground(u, &p).unwrap();
                let k = 2.0 * PI * (quad::integrate(f, ur, upper, 1e-12).unwrap() + quad::integrate(f, us, upper, 1e-12).unwrap());
                let d = reduce_momentum(k) - spinon_momentum(ur, us, &p).unwrap();
                assert!(d.abs() < 1e-9, "{p}: {d}");
            }
        }
    }

    #[test]
    fn gapless_far_holes() {
        let p = ModelParams::real_eta(4, 1.0, 1.0).unwrap();
        assert!(spinon_energy(40.0, -40.0, &p).unwrap().delta_e < 1e-12);
    }

    #[test]
    fn regular_density_shift_integrates_to_its_transform_at_zero() {
        // int J = J~(0) = a~_2(0) / (1 + a~_2(0))
        let p = ModelParams::real_eta(4, 1.0, 0.5).unwrap();
        let v = quad::integrate_real_line(|u| delta_rho_regular(u, 0.0, 0.0, &p).unwrap(), 1e-8).unwrap();
        let t = kernel_a_transform(2, 0.0, &p).unwrap();
        assert!((v - 2.0 * t / (1.0 + t)).abs() < 1e-7, "{v}");
    }

    #[test]
    fn arch_counting() {
        let one: Vec<(f64, f64)> = (0..100).map(|k| {
            let x = -PI + 2.0 * PI * (k as f64 + 0.5) / 100.0;
            (x, x.cos() + 1.0)
        }).collect();
        assert_eq!(count_arches(&one, 100), 1);
        let three: Vec<(f64, f64)> = one.iter().map(|&(x, _)| (x, (3.0 * x).cos() + 1.0)).collect();
        assert_eq!(count_arches(&three, 100), 3);
        assert_eq!(count_arches(&[], 10), 0);
        assert_eq!(count_arches(&[(0.0, 1.0), (1.0, 1.0)], 10), 0);
    }

    #[test]
    fn dispersion_sizes() {
        let p = ModelParams::imag_eta(4, 1.0, 1.0).unwrap();
        let d = dispersion_curve(&p, 200, DispersionMode::Diagonal).unwrap();
        assert_eq!(d.points.len(), 200);
        assert!(d.points.iter().all(|q| q.delta_e >= 0.0));
        let d = dispersion_curve(&p, 10, DispersionMode::Pairs).unwrap();
        assert_eq!(d.points.len(), 55);
        assert!(dispersion_curve(&p, 1, DispersionMode::Diagonal).is_err());
    }

    #[test]
    fn momentum_uniform_holes_hit_their_targets() {
        let p = ModelParams::imag_eta(4, 1.0, 1.0).unwrap();
        let holes = momentum_uniform_holes(&p, 16).unwrap();
        for (k, u) in holes.iter().enumerate() {
            let target = PI * (k as f64 + 0.5) / 16.0;
            assert!((hole_momentum(*u, &p).unwrap() - target).abs() < 1e-12);
        }
        assert!(holes.windows(2).all(|w| w[0] > w[1]));
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(64))]

        #[test]
        fn hole_momentum_is_decreasing_within_zero_and_pi(
            anis in 0.3f64..2.5,
            inhom in -1.5f64..1.5,
            imag in proptest::bool::ANY,
            x in -0.99f64..0.99,
            step in 1e-3f64..0.5,
        ) {
            let p = if imag {
                ModelParams::imag_eta(4, anis, inhom).unwrap()
            } else {
                ModelParams::real_eta(4, anis, inhom).unwrap()
            };
            let (lo, hi) = hole_window(&p).unwrap();
            let u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
            let v = (u + step).min(hi);
            let (pu, pv) = (hole_momentum(u, &p).unwrap(), hole_momentum(v, &p).unwrap());
            proptest::prop_assert!((-1e-12..=PI + 1e-12).contains(&pu));
            proptest::prop_assert!(pv <= pu + 1e-12);
            let k = reduce_momentum(pu + pv) - spinon_momentum(u, v, &p).unwrap();
            proptest::prop_assert!(k.abs() < 1e-9 || (k.abs() - 2.0 * PI).abs() < 1e-9);
        }
    }
}
