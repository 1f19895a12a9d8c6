//! Bethe ansatz equations, energies from roots, root solvers and
//! completeness checks against exact diagonalization.
//!
//! Four parametrizations are supported. With `lambda` the rational-form root:
//!
//! * `RationalLambda`: `lambda` itself, valid in every regime.
//! * `RealEtaU`: `lambda = i u / 2 - eta / 2`, `a = i b`, real `eta`.
//! * `ImagEtaU`: `lambda = u / 2 - eta / 2`, `eta = i gamma`, real `a`.
//! * `NonhermitianU`: `lambda = i u / 2 - eta / 2`, real `a` and `eta`.
//!
//! Each family has the shape
//! `[prod_s f(x + s A + d) / f(x + s A - d)]^N = prod_{l != j} f(x_j - x_l + 2 d) / f(x_j - x_l - 2 d)`
//! with `f` one of `sinh(x/2)`, `sin(x/2)`, `sin(x)`; [`BaeForm`] stores `f`,
//! `A` and `d`.

mod completeness;
mod solver;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, ModelParams, Regime, Result, C64};

pub use completeness::{match_spectrum, CompletenessReport, MatchedLevel};
pub use solver::{solve_bae, solve_log_bae, SolveReport, SolveStrategy};

/// Acceptance threshold on [`BetheRoots::residual`].
pub const ACCEPT_TOL: f64 = 1e-10;
/// Roots closer than this (modulo the period) count as equal.
pub const DEDUP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parametrization {
    RationalLambda,
    RealEtaU,
    ImagEtaU,
    NonhermitianU,
}

impl Parametrization {
    /// The `u` parametrization belonging to a regime.
    pub fn native(regime: Regime) -> Self {
        match regime {
            Regime::RealEtaHermitian => Self::RealEtaU,
            Regime::ImagEtaHermitian => Self::ImagEtaU,
            Regime::Nonhermitian => Self::NonhermitianU,
        }
    }

    pub fn check(self, regime: Regime) -> Result<()> {
        if self == Self::RationalLambda || self == Self::native(regime) {
            Ok(())
        } else {
            Err(Error::ParametrizationMismatch { found: self.to_string(), regime: regime.to_string() })
        }
    }

    fn trig(self) -> Trig {
        match self {
            Self::RationalLambda => Trig::Sin,
            Self::RealEtaU | Self::NonhermitianU => Trig::SinhHalf,
            Self::ImagEtaU => Trig::SinHalf,
        }
    }

    /// Period of the equations and energies in the root variable.
    pub fn period(self) -> C64 {
        self.trig().period()
    }

    /// Representative of `z` with the periodic coordinate in
    /// `[-P/2, P/2)`; values within `1e-9` of `+P/2` wrap to `-P/2`.
    pub fn reduce(self, z: C64) -> C64 {
        let per = self.period();
        let (len, along_im) = if per.re == 0.0 { (per.im, true) } else { (per.re, false) };
        let coord = if along_im { z.im } else { z.re };
        let mut r = coord - len * ((coord + len / 2.0) / len).floor();
        if r >= len / 2.0 - 1e-9 {
            r -= len;
        }
        if along_im {
            C64::new(z.re, r)
        } else {
            C64::new(r, z.im)
        }
    }

    /// Rational-form root for a root in this parametrization.
    pub fn to_lambda(self, z: C64, p: &ModelParams) -> C64 {
        let eta = p.eta();
        let i = C64::new(0.0, 1.0);
        match self {
            Self::RationalLambda => z,
            Self::RealEtaU | Self::NonhermitianU => i * z / 2.0 - eta / 2.0,
            Self::ImagEtaU => z / 2.0 - eta / 2.0,
        }
    }

    /// Inverse of [`Parametrization::to_lambda`].
    pub fn from_lambda(self, lambda: C64, p: &ModelParams) -> C64 {
        let eta = p.eta();
        let i = C64::new(0.0, 1.0);
        match self {
            Self::RationalLambda => lambda,
            Self::RealEtaU | Self::NonhermitianU => -2.0 * i * (lambda + eta / 2.0),
            Self::ImagEtaU => 2.0 * lambda + eta,
        }
    }
}

impl fmt::Display for Parametrization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RationalLambda => "rational-lambda",
            Self::RealEtaU => "real-eta-u",
            Self::ImagEtaU => "imag-eta-u",
            Self::NonhermitianU => "nonhermitian-u",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Trig {
    SinhHalf,
    SinHalf,
    Sin,
}

impl Trig {
    fn f(self, x: C64) -> C64 {
        match self {
            Trig::SinhHalf => (x / 2.0).sinh(),
            Trig::SinHalf => (x / 2.0).sin(),
            Trig::Sin => x.sin(),
        }
    }

    /// `f'/f`.
    fn log_derivative(self, x: C64) -> C64 {
        match self {
            Trig::SinhHalf => 0.5 / (x / 2.0).tanh(),
            Trig::SinHalf => 0.5 / (x / 2.0).tan(),
            Trig::Sin => 1.0 / x.tan(),
        }
    }

    fn period(self) -> C64 {
        match self {
            Trig::SinhHalf => C64::new(0.0, 2.0 * PI),
            Trig::SinHalf => C64::new(2.0 * PI, 0.0),
            Trig::Sin => C64::new(PI, 0.0),
        }
    }
}

/// One BAE family instantiated at given couplings.
#[derive(Debug, Clone, Copy)]
pub(crate) struct BaeForm {
    trig: Trig,
    shift: C64,
    delta: C64,
    /// Added to a root to get the argument `x`.
    offset: C64,
    half_sites: usize,
}

impl BaeForm {
    pub(crate) fn new(param: Parametrization, p: &ModelParams) -> Result<Self> {
        param.check(p.regime)?;
        let i = C64::new(0.0, 1.0);
        let (shift, delta, offset) = match param {
            Parametrization::RationalLambda => (p.a(), p.eta() / 2.0, p.eta() / 2.0),
            // A = 2b with a = i b, so b = -i a covers both u forms
            Parametrization::RealEtaU | Parametrization::NonhermitianU => (-2.0 * i * p.a(), -i * p.eta(), C64::new(0.0, 0.0)),
            Parametrization::ImagEtaU => (2.0 * p.a(), -i * p.anisotropy, C64::new(0.0, 0.0)),
        };
        Ok(Self { trig: param.trig(), shift, delta, offset, half_sites: p.half_sites() })
    }

    fn sides(&self, roots: &[C64], j: usize) -> (C64, C64) {
        let x = roots[j] + self.offset;
        let f = |z| self.trig.f(z);
        let mut ratio = C64::new(1.0, 0.0);
        for s in [1.0, -1.0] {
            ratio *= f(x + s * self.shift + self.delta) / f(x + s * self.shift - self.delta);
        }
        let lhs = ratio.powu(self.half_sites as u32);
        let mut rhs = C64::new(1.0, 0.0);
        for (l, &ul) in roots.iter().enumerate() {
            if l != j {
                let d = roots[j] - ul;
                rhs *= f(d + 2.0 * self.delta) / f(d - 2.0 * self.delta);
            }
        }
        (lhs, rhs)
    }

    /// `Log(LHS_j / RHS_j)` for every root.
    pub(crate) fn log_system(&self, roots: &[C64]) -> Vec<C64> {
        (0..roots.len())
            .map(|j| {
                let (l, r) = self.sides(roots, j);
                (l / r).ln()
            })
            .collect()
    }

    /// Jacobian of [`BaeForm::log_system`].
    pub(crate) fn log_jacobian(&self, roots: &[C64]) -> nalgebra::DMatrix<C64> {
        let m = roots.len();
        let g = |z| self.trig.log_derivative(z);
        let mut jac = nalgebra::DMatrix::zeros(m, m);
        for j in 0..m {
            let x = roots[j] + self.offset;
            let mut diag = C64::new(0.0, 0.0);
            for s in [1.0, -1.0] {
                diag += g(x + s * self.shift + self.delta) - g(x + s * self.shift - self.delta);
            }
            diag *= self.half_sites as f64;
            for l in 0..m {
                if l != j {
                    let d = roots[j] - roots[l];
                    let k = g(d + 2.0 * self.delta) - g(d - 2.0 * self.delta);
                    diag -= k;
                    jac[(j, l)] = k;
                }
            }
            jac[(j, j)] = diag;
        }
        jac
    }

    /// Whether `z` sits on a zero or pole of the left-hand side.
    pub(crate) fn near_singular(&self, z: C64, tol: f64) -> bool {
        let x = z + self.offset;
        [1.0, -1.0].iter().any(|&s| {
            self.trig.f(x + s * self.shift + self.delta).norm() < tol || self.trig.f(x + s * self.shift - self.delta).norm() < tol
        })
    }
}

/// Integer or half-odd-integer quantum number stored as `2 I`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct QuantumNumber(pub i32);

impl QuantumNumber {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    /// `-(M-1)/2, ..., (M-1)/2`.
    pub fn symmetric(m: usize) -> Vec<Self> {
        (0..m as i32).map(|k| Self(2 * k - (m as i32 - 1))).collect()
    }
}

impl fmt::Display for QuantumNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// A set of Bethe roots with its maximal scaled BAE defect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRoots {
    pub roots: Vec<C64>,
    pub parametrization: Parametrization,
    pub quantum_numbers: Option<Vec<QuantumNumber>>,
    /// `max_j |LHS_j - RHS_j| / max(1, |LHS_j|, |RHS_j|)`.
    pub residual: f64,
}

impl BetheRoots {
    /// Wraps roots and computes their residual.
    pub fn new(roots: Vec<C64>, parametrization: Parametrization, p: &ModelParams) -> Result<Self> {
        let residual = max_defect(&roots, parametrization, p)?;
        Ok(Self { roots, parametrization, quantum_numbers: None, residual })
    }

    pub fn empty(parametrization: Parametrization) -> Self {
        Self { roots: Vec::new(), parametrization, quantum_numbers: None, residual: 0.0 }
    }

    /// Magnon number `M`.
    pub fn m(&self) -> usize {
        self.roots.len()
    }

    /// The same solution as rational-form roots.
    pub fn lambdas(&self, p: &ModelParams) -> Vec<C64> {
        self.roots.iter().map(|&z| self.parametrization.to_lambda(z, p)).collect()
    }

    pub fn is_accepted(&self) -> bool {
        self.residual < ACCEPT_TOL
    }

    /// Roots reduced to the fundamental strip and sorted by (re, im).
    pub fn canonical_roots(&self) -> Vec<C64> {
        let mut r: Vec<C64> = self.roots.iter().map(|&z| self.parametrization.reduce(z)).collect();
        crate::spectrum::sort_complex(&mut r);
        r
    }

    /// Equality modulo period and permutation with tolerance [`DEDUP_TOL`].
    pub fn same_solution(&self, other: &Self) -> bool {
        if self.parametrization != other.parametrization || self.m() != other.m() {
            return false;
        }
        let per = self.parametrization.period();
        self.canonical_roots().iter().zip(other.canonical_roots()).all(|(x, y)| {
            let d = x - y;
            d.norm() < DEDUP_TOL || (d - per).norm() < DEDUP_TOL || (d + per).norm() < DEDUP_TOL
        })
    }
}

fn check_collisions(roots: &[C64], param: Parametrization) -> Result<()> {
    let per = param.period();
    for j in 0..roots.len() {
        for l in j + 1..roots.len() {
            let d = param.reduce(roots[j] - roots[l]);
            if d.norm() < 1e-14 || (d + per).norm() < 1e-14 {
                return Err(Error::RootCollision { first: j, second: l });
            }
        }
    }
    Ok(())
}

/// Per-root defect `LHS_j - RHS_j` of the BAE family of `param`.
pub fn bae_residual(roots: &[C64], param: Parametrization, p: &ModelParams) -> Result<Vec<C64>> {
    let form = BaeForm::new(param, p)?;
    check_collisions(roots, param)?;
    Ok((0..roots.len())
        .map(|j| {
            let (l, r) = form.sides(roots, j);
            l - r
        })
        .collect())
}

/// `max_j |LHS_j - RHS_j| / max(1, |LHS_j|, |RHS_j|)`; infinite when a side
/// is not finite.
pub fn max_defect(roots: &[C64], param: Parametrization, p: &ModelParams) -> Result<f64> {
    let form = BaeForm::new(param, p)?;
    check_collisions(roots, param)?;
    let mut worst = 0.0f64;
    for j in 0..roots.len() {
        let (l, r) = form.sides(roots, j);
        let d = (l - r).norm() / 1f64.max(l.norm()).max(r.norm());
        if !d.is_finite() {
            return Ok(f64::INFINITY);
        }
        worst = worst.max(d);
    }
    Ok(worst)
}

fn require_real_eta(p: &ModelParams) -> Result<()> {
    if p.regime != Regime::RealEtaHermitian {
        return Err(Error::ParametrizationMismatch { found: "log form".into(), regime: p.regime.to_string() });
    }
    Ok(())
}

/// `theta_n(x) = 2 arctan(tanh(x/2) / tan(n eta / 2))`.
pub fn theta(n: u32, x: f64, eta: f64) -> Result<f64> {
    let t = (n as f64 * eta / 2.0).tan();
    if t.abs() < 1e-12 {
        return Err(Error::KernelPole(format!("tan({n} eta / 2) = 0")));
    }
    Ok(2.0 * ((x / 2.0).tanh() / t).atan())
}

/// `d theta_n / dx = sin(n eta) / (cosh x - cos(n eta))`.
pub fn theta_derivative(n: u32, x: f64, eta: f64) -> f64 {
    let ne = n as f64 * eta;
    ne.sin() / (x.cosh() - ne.cos())
}

/// Log-form defect `N[theta_1(u_j + 2b) + theta_1(u_j - 2b)] - 2 pi I_j - sum_k theta_2(u_j - u_k)`.
pub fn bae_log_residual(roots: &[f64], qn: &[QuantumNumber], p: &ModelParams) -> Result<Vec<f64>> {
    require_real_eta(p)?;
    if roots.len() != qn.len() {
        return Err(Error::InvalidParams(format!("{} roots but {} quantum numbers", roots.len(), qn.len())));
    }
    let (eta, b, n) = (p.anisotropy, p.inhomogeneity, p.half_sites() as f64);
    roots
        .iter()
        .zip(qn)
        .map(|(&u, q)| {
            let mut s = n * (theta(1, u + 2.0 * b, eta)? + theta(1, u - 2.0 * b, eta)?) - 2.0 * PI * q.value();
            for &v in roots {
                s -= theta(2, u - v, eta)?;
            }
            Ok(s)
        })
        .collect()
}

/// `Z(u) = [theta_1(u + 2b) + theta_1(u - 2b) - (1/N) sum_k theta_2(u - u_k)] / (4 pi)`.
pub fn counting_function(u: f64, roots: &[f64], p: &ModelParams) -> Result<f64> {
    require_real_eta(p)?;
    let (eta, b, n) = (p.anisotropy, p.inhomogeneity, p.half_sites() as f64);
    let mut s = theta(1, u + 2.0 * b, eta)? + theta(1, u - 2.0 * b, eta)?;
    for &v in roots {
        s -= theta(2, u - v, eta)? / n;
    }
    Ok(s / (4.0 * PI))
}

fn kernel_term(den: C64, what: &str) -> Result<C64> {
    if den.norm() < 1e-12 {
        return Err(Error::KernelPole(what.into()));
    }
    Ok(1.0 / den)
}

/// Energy of the Bethe state, using the energy formula of the roots'
/// parametrization.
pub fn energy_from_roots(roots: &BetheRoots, p: &ModelParams) -> Result<C64> {
    roots.parametrization.check(p.regime)?;
    let n = p.half_sites() as f64;
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    match roots.parametrization {
        Parametrization::RealEtaU => {
            let (eta, b) = (p.anisotropy, p.inhomogeneity);
            let c = C64::new(eta.cos(), 0.0);
            let mut sum = C64::new(0.0, 0.0);
            for &u in &roots.roots {
                sum += kernel_term((u + 2.0 * b).cosh() - c, "cosh(u + 2b) = cos(eta)")?;
                sum += kernel_term((u - 2.0 * b).cosh() - c, "cosh(u - 2b) = cos(eta)")?;
            }
            let c2b = (2.0 * b).cosh();
            let head = n * eta.cos() * (c2b * c2b - (2.0 * eta).cos()) / eta.sin().powi(2);
            Ok(one * head - ((4.0 * b).cosh() - (2.0 * eta).cos()) * sum)
        }
        Parametrization::ImagEtaU => {
            let (gamma, a) = (p.anisotropy, p.inhomogeneity);
            let ch = C64::new(gamma.cosh(), 0.0);
            let mut sum = C64::new(0.0, 0.0);
            for &u in &roots.roots {
                sum += kernel_term(ch - (u + 2.0 * a).cos(), "cos(u + 2a) = cosh(gamma)")?;
                sum += kernel_term(ch - (u - 2.0 * a).cos(), "cos(u - 2a) = cosh(gamma)")?;
            }
            let c2a = (2.0 * a).cos();
            let head = n * gamma.cosh() * ((2.0 * gamma).cosh() - c2a * c2a) / gamma.sinh().powi(2);
            Ok(one * head - ((2.0 * gamma).cosh() - (4.0 * a).cos()) * sum)
        }
        Parametrization::NonhermitianU => {
            let (eta, a) = (p.anisotropy, p.inhomogeneity);
            let c = C64::new(eta.cos(), 0.0);
            let mut sum = C64::new(0.0, 0.0);
            for &u in &roots.roots {
                sum += kernel_term((u + 2.0 * a * i).cosh() - c, "cosh(u + 2ia) = cos(eta)")?;
                sum += kernel_term((u - 2.0 * a * i).cosh() - c, "cosh(u - 2ia) = cos(eta)")?;
            }
            let c2a = (2.0 * a).cos();
            let head = n * eta.cos() * (c2a * c2a - (2.0 * eta).cos()) / eta.sin().powi(2);
            Ok(one * head - ((4.0 * a).cos() - (2.0 * eta).cos()) * sum)
        }
        Parametrization::RationalLambda => {
            let (a, eta) = (p.a(), p.eta());
            let c = eta.cos();
            let mut sum = C64::new(0.0, 0.0);
            for &l in &roots.roots {
                sum += kernel_term((2.0 * l + eta + 2.0 * a).cos() - c, "cos(2 lambda + eta + 2a) = cos(eta)")?;
                sum += kernel_term((2.0 * l + eta - 2.0 * a).cos() - c, "cos(2 lambda + eta - 2a) = cos(eta)")?;
            }
            let c2a = (2.0 * a).cos();
            let head = n * c * (c2a * c2a - (2.0 * eta).cos()) / eta.sin().powu(2);
            Ok(head - ((4.0 * a).cos() - (2.0 * eta).cos()) * sum)
        }
    }
}

/// Serializable solution record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetheRecord {
    pub params: ModelParams,
    pub parametrization: Parametrization,
    pub m: usize,
    pub roots_re: Vec<f64>,
    pub roots_im: Vec<f64>,
    pub quantum_numbers: Option<Vec<f64>>,
    pub residual: f64,
    pub energy_re: f64,
    pub energy_im: f64,
}

impl BetheRecord {
    pub fn new(roots: &BetheRoots, p: &ModelParams) -> Result<Self> {
        let e = energy_from_roots(roots, p)?;
        Ok(Self {
            params: *p,
            parametrization: roots.parametrization,
            m: roots.m(),
            roots_re: roots.roots.iter().map(|z| z.re).collect(),
            roots_im: roots.roots.iter().map(|z| z.im).collect(),
            quantum_numbers: roots.quantum_numbers.as_ref().map(|q| q.iter().map(|x| x.value()).collect()),
            residual: roots.residual,
            energy_re: e.re,
            energy_im: e.im,
        })
    }
}
