//! Direct construction of the J1-J2 Hamiltonian with staggered chirality.
//!
//! The Hamiltonian is kept as a sum of Pauli strings ([`PauliSum`]) and only
//! realised as a matrix on demand, either on the full `2^(2N)` space or on a
//! fixed-magnetization block. Sites are 1-based and periodic, `sigma_{2N+j} =
//! sigma_j`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::spin_algebra::{bit_shift, Axis, OperatorMatrix};
use crate::{Couplings, Error, ModelParams, Result, C64};

/// Hermiticity threshold on the largest entry of `H - H^dagger`.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A product of Pauli matrices on distinct sites with a complex coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub coeff: C64,
    /// `(position, axis)` with 0-based positions, sorted.
    pub ops: Vec<(usize, Axis)>,
    flip: usize,
    y_mask: usize,
    z_mask: usize,
    y_phase: C64,
}

impl PauliString {
    fn new(coeff: C64, ops: Vec<(usize, Axis)>, n_sites: usize) -> Self {
        let (mut flip, mut y_mask, mut z_mask, mut ny) = (0, 0, 0, 0u32);
        for &(pos, axis) in &ops {
            let bit = 1usize << bit_shift(n_sites, pos);
            match axis {
                Axis::X => flip |= bit,
                Axis::Y => {
                    flip |= bit;
                    y_mask |= bit;
                    ny += 1;
                }
                Axis::Z => z_mask |= bit,
            }
        }
        let y_phase = C64::new(0.0, 1.0).powu(ny);
        Self { coeff, ops, flip, y_mask, z_mask, y_phase }
    }

    /// Image of basis state `s` and its amplitude (coefficient included).
    #[inline]
    pub fn apply(&self, s: usize) -> (usize, C64) {
        let parity = ((s & self.y_mask).count_ones() + (s & self.z_mask).count_ones()) & 1;
        let amp = if parity == 0 { self.coeff * self.y_phase } else { -self.coeff * self.y_phase };
        (s ^ self.flip, amp)
    }
}

/// Sum of Pauli strings on an `n_sites` chain. Identical strings are merged.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_sites: usize,
    terms: Vec<PauliString>,
}

#[derive(Default)]
struct PauliSumBuilder {
    acc: BTreeMap<Vec<(usize, u8)>, C64>,
}

impl PauliSumBuilder {
    fn add(&mut self, coeff: C64, ops: &[(usize, Axis)]) {
        if coeff == C64::new(0.0, 0.0) {
            return;
        }
        let mut key: Vec<(usize, u8)> = ops.iter().map(|&(p, a)| (p, a as u8)).collect();
        key.sort_unstable();
        debug_assert!(key.windows(2).all(|w| w[0].0 != w[1].0), "sites must be distinct");
        *self.acc.entry(key).or_insert(C64::new(0.0, 0.0)) += coeff;
    }

    fn finish(self, n_sites: usize) -> PauliSum {
        let terms = self
            .acc
            .into_iter()
            .filter(|(_, c)| *c != C64::new(0.0, 0.0))
            .map(|(key, c)| {
                let ops = key.into_iter().map(|(p, a)| (p, Axis::ALL[a as usize])).collect();
                PauliString::new(c, ops, n_sites)
            })
            .collect();
        PauliSum { n_sites, terms }
    }
}

impl PauliSum {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn to_dense(&self) -> OperatorMatrix {
        let dim = 1usize << self.n_sites;
        let mut m = DMatrix::zeros(dim, dim);
        for s in 0..dim {
            for term in &self.terms {
                let (t, amp) = term.apply(s);
                m[(t, s)] += amp;
            }
        }
        OperatorMatrix::from_matrix(self.n_sites, m)
    }

    /// Block on the states with exactly `magnons` down spins, rows and columns
    /// ordered as [`sector_basis`]. Only exact when the sum conserves total
    /// `sigma^z`.
    pub fn sector_block(&self, magnons: usize) -> DMatrix<C64> {
        let basis = sector_basis(self.n_sites, magnons);
        let index: std::collections::HashMap<usize, usize> = basis.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut m = DMatrix::zeros(basis.len(), basis.len());
        for (col, &s) in basis.iter().enumerate() {
            for term in &self.terms {
                let (t, amp) = term.apply(s);
                if let Some(&row) = index.get(&t) {
                    m[(row, col)] += amp;
                }
            }
        }
        m
    }
}

/// Basis states with `magnons` down spins (set bits), ascending.
pub fn sector_basis(n_sites: usize, magnons: usize) -> Vec<usize> {
    (0..1usize << n_sites).filter(|s| s.count_ones() as usize == magnons).collect()
}

/// Total `sum_j sigma^z_j`.
pub fn magnetization(n_sites: usize) -> PauliSum {
    let mut b = PauliSumBuilder::default();
    for p in 0..n_sites {
        b.add(C64::new(1.0, 0.0), &[(p, Axis::Z)]);
    }
    b.finish(n_sites)
}

fn check_sites(n_sites: usize) -> Result<()> {
    if !n_sites.is_multiple_of(2) {
        return Err(Error::OddSiteCount(n_sites));
    }
    if n_sites < 4 {
        return Err(Error::TooFewSites { min: 4, got: n_sites });
    }
    Ok(())
}

/// Adds `scale * A . (B x C)` for the spin vectors at positions `a, b, c`.
fn add_triple_product(builder: &mut PauliSumBuilder, scale: C64, a: usize, b: usize, c: usize) {
    use Axis::*;
    for (x, y, z) in [(X, Y, Z), (Y, Z, X), (Z, X, Y)] {
        builder.add(scale, &[(a, x), (b, y), (c, z)]);
        builder.add(-scale, &[(a, x), (b, z), (c, y)]);
    }
}

fn add_dot(builder: &mut PauliSumBuilder, scale: C64, a: usize, b: usize) {
    for axis in Axis::ALL {
        builder.add(scale, &[(a, axis), (b, axis)]);
    }
}

/// Pauli-string form of the Hamiltonian for arbitrary complex couplings.
pub fn pauli_terms(couplings: Couplings, n_sites: usize) -> Result<PauliSum> {
    check_sites(n_sites)?;
    let Couplings { a, eta } = Couplings::new(couplings.a, couplings.eta)?;
    let (sin_eta, cos_eta) = (eta.sin(), eta.cos());
    let (sin2a, cos2a) = ((2.0 * a).sin(), (2.0 * a).cos());
    let i = C64::new(0.0, 1.0);

    let nnn = -sin2a * sin2a * cos_eta / (2.0 * sin_eta * sin_eta);
    let chiral = i * sin2a / (2.0 * sin_eta);
    let correction = cos2a - cos_eta;

    let mut b = PauliSumBuilder::default();
    for j in 1..=n_sites {
        let p0 = j - 1;
        let p1 = j % n_sites;
        let p2 = (j + 1) % n_sites;
        b.add(cos2a, &[(p0, Axis::X), (p1, Axis::X)]);
        b.add(cos2a, &[(p0, Axis::Y), (p1, Axis::Y)]);
        b.add(cos_eta, &[(p0, Axis::Z), (p1, Axis::Z)]);
        add_dot(&mut b, nnn, p0, p2);

        let stagger = if j % 2 == 0 { chiral } else { -chiral };
        // sigma_{j+1} . (sigma_j x sigma_{j+2})
        add_triple_product(&mut b, stagger * cos_eta, p1, p0, p2);
        // sigma^z_{j+1} (sigma^x_j sigma^y_{j+2} - sigma^y_j sigma^x_{j+2})
        let k = stagger * correction;
        b.add(k, &[(p1, Axis::Z), (p0, Axis::X), (p2, Axis::Y)]);
        b.add(-k, &[(p1, Axis::Z), (p0, Axis::Y), (p2, Axis::X)]);
    }
    Ok(b.finish(n_sites))
}

/// Pauli-string form of the isotropic J1-J2 chain with chirality `abar`.
pub fn isotropic_terms(abar: f64, n_sites: usize) -> Result<PauliSum> {
    check_sites(n_sites)?;
    let one = C64::new(1.0, 0.0);
    let mut b = PauliSumBuilder::default();
    for j in 1..=n_sites {
        let (p0, p1, p2) = (j - 1, j % n_sites, (j + 1) % n_sites);
        add_dot(&mut b, one, p0, p1);
        add_dot(&mut b, one * (-2.0 * abar * abar), p0, p2);
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        add_triple_product(&mut b, C64::new(0.0, sign * abar), p1, p0, p2);
    }
    Ok(b.finish(n_sites))
}

/// Dense Hamiltonian with its hermiticity classification.
#[derive(Debug, Clone)]
pub struct HamiltonianBuild {
    pub matrix: OperatorMatrix,
    pub params: ModelParams,
    pub hermitian: bool,
    pub hermiticity_defect: f64,
}

pub fn build_direct(p: &ModelParams) -> Result<HamiltonianBuild> {
    let matrix = pauli_terms(p.couplings(), p.n_sites)?.to_dense();
    let hermiticity_defect = matrix.hermiticity_defect();
    Ok(HamiltonianBuild { matrix, params: *p, hermitian: hermiticity_defect < HERMITICITY_TOL, hermiticity_defect })
}

pub fn build_isotropic_limit(abar: f64, n_sites: usize) -> Result<OperatorMatrix> {
    Ok(isotropic_terms(abar, n_sites)?.to_dense())
}

/// Residuals of the two parameter identities of the non-hermitian regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `max |H(a, pi + eta) - H(pi - a, pi - eta)|`.
    pub reflection: f64,
    /// `max |H(a, eta) - H(pi + a, eta)|`.
    pub periodicity: f64,
}

pub fn symmetry_identity_check(a: f64, eta: f64, n_sites: usize) -> Result<SymmetryReport> {
    let h = |a: f64, eta: f64| -> Result<OperatorMatrix> {
        Ok(pauli_terms(Couplings { a: C64::new(a, 0.0), eta: C64::new(eta, 0.0) }, n_sites)?.to_dense())
    };
    let reflection = h(a, PI + eta)?.max_abs_diff(&h(PI - a, PI - eta)?);
    let periodicity = h(a, eta)?.max_abs_diff(&h(PI + a, eta)?);
    Ok(SymmetryReport { reflection, periodicity })
}
