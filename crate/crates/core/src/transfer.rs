//! Inhomogeneous monodromy and transfer matrices.
//!
//! The auxiliary space is the first (slowest) tensor factor of the
//! `aux (x) quantum` product, so the monodromy blocks `A, B, C, D` are the four
//! quadrants of its matrix. Odd sites carry the shift `u + a`, even sites
//! `u - a`; the hatted monodromy runs the chain in reverse with the shifts
//! exchanged.

use nalgebra::DMatrix;

use crate::bethe::BetheRoots;
use crate::spin_algebra::{phi, r_matrix, r_matrix_derivative, right_mul_two_site, OperatorMatrix, TwoSiteMatrix};
use crate::{Couplings, Error, ModelParams, Result, C64};

/// Monodromy matrix on `aux (x) quantum`.
#[derive(Debug, Clone)]
pub struct Monodromy {
    n_sites: usize,
    full: DMatrix<C64>,
}

impl Monodromy {
    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.full
    }

    fn block(&self, row: usize, col: usize) -> OperatorMatrix {
        let d = 1usize << self.n_sites;
        OperatorMatrix::from_matrix(self.n_sites, self.full.view((row * d, col * d), (d, d)).into_owned())
    }

    pub fn a(&self) -> OperatorMatrix {
        self.block(0, 0)
    }

    pub fn b(&self) -> OperatorMatrix {
        self.block(0, 1)
    }

    pub fn c(&self) -> OperatorMatrix {
        self.block(1, 0)
    }

    pub fn d(&self) -> OperatorMatrix {
        self.block(1, 1)
    }

    /// Partial trace over the auxiliary space.
    pub fn trace(&self) -> OperatorMatrix {
        let d = 1usize << self.n_sites;
        let m = self.full.view((0, 0), (d, d)) + self.full.view((d, d), (d, d));
        OperatorMatrix::from_matrix(self.n_sites, m)
    }
}

/// The commuting family `t(u)`, `t_hat(u)` of a chain with fixed couplings.
#[derive(Debug, Clone, Copy)]
pub struct TransferFamily {
    n_sites: usize,
    couplings: Couplings,
}

impl TransferFamily {
    pub fn new(n_sites: usize, couplings: Couplings) -> Result<Self> {
        if !n_sites.is_multiple_of(2) {
            return Err(Error::OddSiteCount(n_sites));
        }
        if n_sites < 2 {
            return Err(Error::TooFewSites { min: 2, got: n_sites });
        }
        let couplings = Couplings::new(couplings.a, couplings.eta)?;
        Ok(Self { n_sites, couplings })
    }

    pub fn from_params(p: &ModelParams) -> Self {
        Self { n_sites: p.n_sites, couplings: p.couplings() }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn couplings(&self) -> Couplings {
        self.couplings
    }

    /// Spectral shift of 1-based `site` in `T(u)`; `T_hat` uses the opposite one.
    fn shift(&self, site: usize) -> C64 {
        if site % 2 == 1 {
            self.couplings.a
        } else {
            -self.couplings.a
        }
    }

    /// `(position, R-matrix argument)` for every factor of the ordered product.
    fn factors(&self, u: C64, hat: bool) -> Vec<(usize, C64)> {
        if hat {
            (1..=self.n_sites).rev().map(|j| (j, u - self.shift(j))).collect()
        } else {
            (1..=self.n_sites).map(|j| (j, u + self.shift(j))).collect()
        }
    }

    fn product(&self, factors: &[(usize, TwoSiteMatrix)]) -> DMatrix<C64> {
        let n_factors = self.n_sites + 1;
        let dim = 1usize << n_factors;
        let mut m = DMatrix::identity(dim, dim);
        for (pos, r) in factors {
            right_mul_two_site(&mut m, r, 0, *pos, n_factors);
        }
        m
    }

    fn r_factors(&self, u: C64, hat: bool) -> Result<Vec<(usize, TwoSiteMatrix)>> {
        let eta = self.couplings.eta;
        self.factors(u, hat).into_iter().map(|(pos, v)| Ok((pos, r_matrix(v, eta)?))).collect()
    }

    pub fn monodromy(&self, u: C64) -> Result<Monodromy> {
        Ok(Monodromy { n_sites: self.n_sites, full: self.product(&self.r_factors(u, false)?) })
    }

    pub fn monodromy_hat(&self, u: C64) -> Result<Monodromy> {
        Ok(Monodromy { n_sites: self.n_sites, full: self.product(&self.r_factors(u, true)?) })
    }

    pub fn transfer(&self, u: C64) -> Result<OperatorMatrix> {
        Ok(self.monodromy(u)?.trace())
    }

    pub fn transfer_hat(&self, u: C64) -> Result<OperatorMatrix> {
        Ok(self.monodromy_hat(u)?.trace())
    }

    /// `dt/du` by the product rule with the analytic R-matrix derivative.
    pub fn transfer_derivative(&self, u: C64) -> Result<OperatorMatrix> {
        let eta = self.couplings.eta;
        let plain = self.r_factors(u, false)?;
        let args = self.factors(u, false);
        let d = 1usize << self.n_sites;
        let mut sum = DMatrix::<C64>::zeros(d, d);
        for k in 0..plain.len() {
            let mut factors = plain.clone();
            factors[k].1 = r_matrix_derivative(args[k].1, eta)?;
            let m = self.product(&factors);
            sum += m.view((0, 0), (d, d)) + m.view((d, d), (d, d));
        }
        Ok(OperatorMatrix::from_matrix(self.n_sites, sum))
    }

    /// Vacuum eigenvalue of `A(u)`.
    pub fn vacuum_a(&self, u: C64) -> C64 {
        let Couplings { a, eta } = self.couplings;
        let n = self.n_sites as i32 / 2;
        ((u + a + eta).sin() * (u - a + eta).sin()).powi(n) / eta.sin().powi(2 * n)
    }

    /// Vacuum eigenvalue of `D(u)`.
    pub fn vacuum_d(&self, u: C64) -> C64 {
        let Couplings { a, eta } = self.couplings;
        let n = self.n_sites as i32 / 2;
        ((u + a).sin() * (u - a).sin()).powi(n) / eta.sin().powi(2 * n)
    }

    /// Hamiltonian from `t_hat(-a) t'(a) + t_hat(a) t'(-a)` plus the constant shift.
    pub fn hamiltonian(&self) -> Result<OperatorMatrix> {
        let Couplings { a, eta } = self.couplings;
        let n = (self.n_sites / 2) as i32;
        let phi2a = phi(2.0 * a, eta);
        if phi2a.norm() < 1e-10 {
            return Err(Error::ResonantInhomogeneity(phi2a.norm()));
        }
        let sin_eta = eta.sin();
        let constant = -(n as f64) * eta.cos() * ((2.0 * a).cos().powi(2) - (2.0 * eta).cos()) / (sin_eta * sin_eta);
        let prefactor = phi2a.powi(1 - n) * sin_eta;

        let first = &self.transfer_hat(-a)? * &self.transfer_derivative(a)?;
        let second = &self.transfer_hat(a)? * &self.transfer_derivative(-a)?;
        let mut h = (&first + &second).scale(prefactor);
        for i in 0..h.dim() {
            h.matrix_mut()[(i, i)] += constant;
        }
        Ok(h)
    }

    /// `Lambda(u)` for Bethe roots given directly as `lambda_j`.
    pub fn eigenvalue_from_lambdas(&self, u: C64, lambdas: &[C64]) -> Result<C64> {
        let eta = self.couplings.eta;
        let mut pa = C64::new(1.0, 0.0);
        let mut pd = C64::new(1.0, 0.0);
        for (index, &l) in lambdas.iter().enumerate() {
            let den = (u - l).sin();
            if den.norm() < 1e-12 {
                return Err(Error::RootPole { index });
            }
            pa *= (u - l - eta).sin() / den;
            pd *= (u - l + eta).sin() / den;
        }
        Ok(self.vacuum_a(u) * pa + self.vacuum_d(u) * pd)
    }
}

pub fn monodromy(u: C64, p: &ModelParams) -> Result<Monodromy> {
    TransferFamily::from_params(p).monodromy(u)
}

pub fn transfer(u: C64, p: &ModelParams) -> Result<OperatorMatrix> {
    TransferFamily::from_params(p).transfer(u)
}

pub fn transfer_hat(u: C64, p: &ModelParams) -> Result<OperatorMatrix> {
    TransferFamily::from_params(p).transfer_hat(u)
}

pub fn hamiltonian_from_transfer(p: &ModelParams) -> Result<OperatorMatrix> {
    TransferFamily::from_params(p).hamiltonian()
}

/// `Lambda(u)` for a set of Bethe roots in any parametrization.
pub fn transfer_eigenvalue(u: C64, roots: &BetheRoots, p: &ModelParams) -> Result<C64> {
    TransferFamily::from_params(p).eigenvalue_from_lambdas(u, &roots.lambdas(p))
}
