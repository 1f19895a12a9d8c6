//! Root finding for the Bethe ansatz equations.
//!
//! Two routes feed one deduplicated solution list:
//!
//! * real-root branches of the real-eta regime: damped Newton on the log form
//!   for every admissible tuple of quantum numbers;
//! * generic branches: damped complex Newton on `Log(LHS/RHS)` from random
//!   seeds, both directly at the target couplings and by continuation of the
//!   inhomogeneity from zero.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{
    bae_log_residual, max_defect, theta, theta_derivative, BaeForm, BetheRoots, Parametrization, QuantumNumber, Trig,
    ACCEPT_TOL,
};
use crate::{Error, ModelParams, Regime, Result, C64};

const CONVERGED: f64 = 1e-12;
const MAX_HALVINGS: usize = 30;
/// Bound on the non-periodic coordinate of an accepted root.
const MAX_COORD: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveStrategy {
    /// Random starts per magnon number.
    pub seeds: usize,
    pub rng_seed: u64,
    /// Newton from each seed at the target couplings.
    pub direct: bool,
    /// Newton from each seed at zero inhomogeneity, then continuation.
    pub continuation: bool,
    /// Initial continuation step in the inhomogeneity fraction.
    pub continuation_step: f64,
    /// Log-form solve over quantum-number tuples (real-eta regime only).
    pub quantum_numbers: bool,
    pub max_newton_iter: usize,
}

impl Default for SolveStrategy {
    fn default() -> Self {
        Self {
            seeds: 200,
            rng_seed: 0,
            direct: true,
            continuation: true,
            continuation_step: 0.1,
            quantum_numbers: true,
            max_newton_iter: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub m: usize,
    pub solutions: Vec<BetheRoots>,
    pub attempts: usize,
    pub converged: usize,
    pub diagnostics: Vec<String>,
}

fn max_abs(v: &[C64]) -> f64 {
    v.iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Damped Newton on `Log(LHS/RHS) = 0`.
fn newton(form: &BaeForm, mut x: Vec<C64>, max_iter: usize) -> Option<Vec<C64>> {
    let mut g = form.log_system(&x);
    let mut norm = norm2(&g);
    for _ in 0..max_iter {
        if !norm.is_finite() {
            return None;
        }
        if max_abs(&g) < CONVERGED {
            return Some(x);
        }
        let jac = form.log_jacobian(&x);
        let rhs = -DVector::from_vec(g.clone());
        let step = jac.lu().solve(&rhs)?;
        if step.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return None;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<C64> = x.iter().zip(step.iter()).map(|(a, s)| a + s * t).collect();
            let gt = form.log_system(&trial);
            let nt = norm2(&gt);
            if nt < norm {
                x = trial;
                g = gt;
                norm = nt;
                accepted = true;
                break;
            }
            t /= 2.0;
        }
        if !accepted {
            return (max_abs(&g) < CONVERGED).then_some(x);
        }
    }
    (max_abs(&g) < CONVERGED).then_some(x)
}

fn free_coordinate(param: Parametrization, z: C64) -> f64 {
    if param.period().re == 0.0 {
        z.re
    } else {
        z.im
    }
}

/// Rejects divergent roots, coincident roots and roots on singular points.
fn admissible(form: &BaeForm, param: Parametrization, roots: &[C64]) -> bool {
    if roots.iter().any(|z| !z.re.is_finite() || !z.im.is_finite() || free_coordinate(param, *z).abs() > MAX_COORD) {
        return false;
    }
    if roots.iter().any(|&z| form.near_singular(z, 1e-8)) {
        return false;
    }
    let per = param.period();
    for j in 0..roots.len() {
        for l in j + 1..roots.len() {
            let d = param.reduce(roots[j] - roots[l]);
            if d.norm() < 1e-6 || (d + per).norm() < 1e-6 {
                return false;
            }
            let f = |z| form.trig.f(z);
            if f(d + 2.0 * form.delta).norm() < 1e-8 || f(d - 2.0 * form.delta).norm() < 1e-8 {
                return false;
            }
        }
    }
    true
}

fn random_seed(rng: &mut ChaCha8Rng, param: Parametrization, m: usize) -> Vec<C64> {
    (0..m)
        .map(|_| match param.trig() {
            Trig::SinhHalf => C64::new(rng.random_range(-5.0..5.0), rng.random_range(-PI..PI)),
            Trig::SinHalf => C64::new(rng.random_range(-PI..PI), rng.random_range(-3.0..3.0)),
            Trig::Sin => C64::new(rng.random_range(-PI / 2.0..PI / 2.0), rng.random_range(-2.0..2.0)),
        })
        .collect()
}

/// Follows a solution from inhomogeneity 0 to the target value, halving the
/// step on failure.
fn continue_in_inhomogeneity(
    param: Parametrization,
    p: &ModelParams,
    start: Vec<C64>,
    step: f64,
    max_iter: usize,
) -> Result<Option<Vec<C64>>> {
    let target = p.inhomogeneity;
    let form0 = BaeForm::new(param, &p.with_inhomogeneity(0.0))?;
    let Some(mut x) = newton(&form0, start, max_iter) else { return Ok(None) };
    let (mut s, mut h) = (0.0f64, step);
    while s < 1.0 {
        let next = (s + h).min(1.0);
        let form = BaeForm::new(param, &p.with_inhomogeneity(next * target))?;
        match newton(&form, x.clone(), max_iter) {
            Some(y) if admissible(&form, param, &y) => {
                x = y;
                s = next;
            }
            _ => {
                h /= 2.0;
                if h < 1e-3 {
                    return Ok(None);
                }
            }
        }
    }
    Ok(Some(x))
}

fn accept(roots: Vec<C64>, param: Parametrization, p: &ModelParams) -> Option<BetheRoots> {
    let reduced: Vec<C64> = roots.iter().map(|&z| param.reduce(z)).collect();
    let r = BetheRoots::new(reduced, param, p).ok()?;
    let mut r = r;
    let mut sorted = r.roots.clone();
    crate::spectrum::sort_complex(&mut sorted);
    r.roots = sorted;
    r.is_accepted().then_some(r)
}

fn push_unique(out: &mut Vec<BetheRoots>, cand: BetheRoots) {
    if !out.iter().any(|s| s.same_solution(&cand)) {
        out.push(cand);
    }
}

/// Admissible quantum-number tuples for `M` real roots: strictly increasing,
/// `|I_j| <= N/2`, integers for odd `M` and half-odd integers for even `M`.
pub fn quantum_number_tuples(half_sites: usize, m: usize) -> Vec<Vec<QuantumNumber>> {
    let bound = half_sites as i32; // bound on 2|I|
    let parity = if m % 2 == 1 { 0 } else { 1 };
    let values: Vec<i32> = (-bound..=bound).filter(|v| v.rem_euclid(2) == parity).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(m);
    fn rec(values: &[i32], start: usize, m: usize, current: &mut Vec<QuantumNumber>, out: &mut Vec<Vec<QuantumNumber>>) {
        if current.len() == m {
            out.push(current.clone());
            return;
        }
        for i in start..values.len() {
            current.push(QuantumNumber(values[i]));
            rec(values, i + 1, m, current, out);
            current.pop();
        }
    }
    rec(&values, 0, m, &mut current, &mut out);
    out
}

/// Solves the log-form equations for one tuple of quantum numbers.
pub fn solve_log_bae(p: &ModelParams, qn: &[QuantumNumber]) -> Result<BetheRoots> {
    if p.regime != Regime::RealEtaHermitian {
        return Err(Error::ParametrizationMismatch { found: "log form".into(), regime: p.regime.to_string() });
    }
    let (eta, b, n) = (p.anisotropy, p.inhomogeneity, p.half_sites() as f64);
    theta(2, 0.0, eta)?;
    let m = qn.len();
    let bare = |u: f64| -> f64 { n * (theta(1, u + 2.0 * b, eta).unwrap() + theta(1, u - 2.0 * b, eta).unwrap()) };
    // Non-interacting guess by bisection on the monotone bare phase.
    let mut x: Vec<f64> = qn
        .iter()
        .map(|q| {
            let target = 2.0 * PI * q.value();
            let (mut lo, mut hi) = (-20.0f64, 20.0f64);
            if target <= bare(lo) {
                return lo / 2.0;
            }
            if target >= bare(hi) {
                return hi / 2.0;
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if bare(mid) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect();
    // separate coincident guesses
    for j in 1..m {
        if x[j] <= x[j - 1] {
            x[j] = x[j - 1] + 1e-3;
        }
    }
    let f = |x: &[f64]| bae_log_residual(x, qn, p);
    let mut g = f(&x)?;
    let mut norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut converged = false;
    for _ in 0..200 {
        if g.iter().all(|v| v.abs() < CONVERGED) {
            converged = true;
            break;
        }
        let mut jac = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            let mut diag = n * (theta_derivative(1, x[j] + 2.0 * b, eta) + theta_derivative(1, x[j] - 2.0 * b, eta));
            for l in 0..m {
                if l != j {
                    let k = theta_derivative(2, x[j] - x[l], eta);
                    diag -= k;
                    jac[(j, l)] = k;
                }
            }
            jac[(j, j)] = diag;
        }
        let Some(step) = jac.lu().solve(&(-DVector::from_vec(g.clone()))) else { break };
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..=MAX_HALVINGS {
            let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + t * s).collect();
            let gt = f(&trial)?;
            let nt = gt.iter().map(|v| v * v).sum::<f64>().sqrt();
            if nt < norm {
                x = trial;
                g = gt;
                norm = nt;
                accepted = true;
                break;
            }
            t /= 2.0;
        }
        if !accepted {
            converged = g.iter().all(|v| v.abs() < CONVERGED);
            break;
        }
    }
    if !converged || x.iter().any(|v| !v.is_finite() || v.abs() > MAX_COORD) {
        return Err(Error::NoConvergence(format!("log-form equations for I = {qn:?}")));
    }
    let roots: Vec<C64> = x.iter().map(|&u| C64::new(u, 0.0)).collect();
    let residual = max_defect(&roots, Parametrization::RealEtaU, p)?;
    Ok(BetheRoots { roots, parametrization: Parametrization::RealEtaU, quantum_numbers: Some(qn.to_vec()), residual })
}

fn seed_rng(base: u64, m: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(((m as u64) << 32) | index as u64);
    rng
}

/// All solutions with `m` roots found by the strategy, in the native
/// parametrization of the regime, deduplicated and in a deterministic order.
pub fn solve_bae(p: &ModelParams, m: usize, strategy: &SolveStrategy) -> Result<SolveReport> {
    let n = p.half_sites();
    if m > n {
        return Err(Error::InvalidParams(format!("M = {m} exceeds N = {n}; use the spin-flipped sector")));
    }
    let param = Parametrization::native(p.regime);
    let mut report = SolveReport { m, solutions: Vec::new(), attempts: 0, converged: 0, diagnostics: Vec::new() };
    if m == 0 {
        report.solutions.push(BetheRoots::empty(param));
        return Ok(report);
    }
    let form = BaeForm::new(param, p)?;

    if strategy.quantum_numbers && p.regime == Regime::RealEtaHermitian {
        for qn in quantum_number_tuples(n, m) {
            report.attempts += 1;
            match solve_log_bae(p, &qn) {
                Ok(r) if r.is_accepted() && admissible(&form, param, &r.roots) => {
                    report.converged += 1;
                    push_unique(&mut report.solutions, r);
                }
                Ok(r) => report.diagnostics.push(format!("I = {qn:?}: residual {:e}", r.residual)),
                Err(e) => report.diagnostics.push(format!("I = {qn:?}: {e}")),
            }
        }
    }

    let candidates: Vec<Vec<Result<Option<Vec<C64>>>>> = (0..strategy.seeds)
        .into_par_iter()
        .map(|index| {
            let mut rng = seed_rng(strategy.rng_seed, m, index);
            let seed = random_seed(&mut rng, param, m);
            let mut found = Vec::new();
            if strategy.direct {
                found.push(Ok(newton(&form, seed.clone(), strategy.max_newton_iter)));
            }
            if strategy.continuation && p.inhomogeneity != 0.0 {
                found.push(continue_in_inhomogeneity(param, p, seed, strategy.continuation_step, strategy.max_newton_iter));
            }
            found
        })
        .collect();

    for outcome in candidates.into_iter().flatten() {
        report.attempts += 1;
        if let Some(roots) = outcome? {
            if !admissible(&form, param, &roots) {
                continue;
            }
            if let Some(r) = accept(roots, param, p) {
                report.converged += 1;
                push_unique(&mut report.solutions, r);
            }
        }
    }
    debug_assert!(report.solutions.iter().all(|s| s.residual < ACCEPT_TOL));
    if report.solutions.is_empty() {
        report.diagnostics.push(format!("no solution with M = {m} after {} attempts", report.attempts));
    }
    Ok(report)
}
