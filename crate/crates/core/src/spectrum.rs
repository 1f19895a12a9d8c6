//! Dense eigensolution, level grouping and the reality scan of the
//! non-hermitian regime.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::hamiltonian::pauli_terms;
use crate::spin_algebra::OperatorMatrix;
use crate::{Couplings, Error, ModelParams, Result, C64};

/// Largest matrix dimension handled by the dense solvers.
pub const DENSE_LIMIT: usize = 4096;
/// Reality tolerance relative to the spectral radius.
pub const REALITY_RTOL: f64 = 1e-8;
/// Level-grouping tolerance relative to the spectral radius.
pub const LEVEL_RTOL: f64 = 1e-6;

const SCHUR_EPS: f64 = f64::EPSILON;
const SCHUR_RETRIES: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: C64,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<C64>,
    pub levels: Vec<Level>,
    pub all_real: bool,
    pub max_imag: f64,
    pub spectral_radius: f64,
}

impl SpectrumResult {
    /// Sorts, groups with `LEVEL_RTOL * rho` and classifies with
    /// `REALITY_RTOL * rho`.
    pub fn from_eigenvalues(mut eigenvalues: Vec<C64>) -> Self {
        sort_complex(&mut eigenvalues);
        let spectral_radius = eigenvalues.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let max_imag = eigenvalues.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        let levels = group_levels(&eigenvalues, LEVEL_RTOL * spectral_radius);
        Self {
            eigenvalues,
            levels,
            all_real: is_real_spectrum(max_imag, spectral_radius),
            max_imag,
            spectral_radius,
        }
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Smallest real part.
    pub fn min_real(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    /// Level values (real parts) regrouped with an explicit tolerance.
    pub fn regroup(&self, tol: f64) -> Vec<Level> {
        group_levels(&self.eigenvalues, tol)
    }
}

fn is_real_spectrum(max_imag: f64, spectral_radius: f64) -> bool {
    max_imag <= REALITY_RTOL * spectral_radius
}

pub fn sort_complex(v: &mut [C64]) {
    v.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
}

/// Full spectrum of an operator.
pub fn eigs(h: &OperatorMatrix, hermitian_hint: bool) -> Result<SpectrumResult> {
    Ok(SpectrumResult::from_eigenvalues(eigenvalues(h.matrix(), hermitian_hint)?))
}

/// Unsorted eigenvalues of a square matrix.
///
/// With `hermitian_hint` the hermitian solver is used and only the lower
/// triangle is read; the result is exactly real. Otherwise a real Schur
/// decomposition is used when every entry is real, a complex one if not.
pub fn eigenvalues(m: &DMatrix<C64>, hermitian_hint: bool) -> Result<Vec<C64>> {
    let dim = m.nrows();
    if dim != m.ncols() {
        return Err(Error::InvalidParams(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    if dim > DENSE_LIMIT {
        return Err(Error::DimensionTooLarge { dim, limit: DENSE_LIMIT });
    }
    if dim == 0 {
        return Ok(Vec::new());
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::InvalidParams("matrix has non-finite entries".into()));
    }
    let real = m.iter().all(|z| z.im == 0.0);
    if hermitian_hint {
        // eigenvalues only; uncapped iteration, so no failure path
        let values = if real { m.map(|z| z.re).symmetric_eigenvalues() } else { m.symmetric_eigenvalues() };
        return Ok(values.iter().map(|&x| C64::new(x, 0.0)).collect());
    }
    if real {
        let re = m.map(|z| z.re);
        if let Some(schur) = Schur::try_new(re, SCHUR_EPS, schur_iterations(dim)) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    // Defective matrices (exceptional points) can stall the shifted QR
    // iteration; a rotated and shifted copy changes the shift sequence.
    for attempt in 0..=SCHUR_RETRIES {
        let (rot, shift) = if attempt == 0 {
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            let k = attempt as f64;
            (C64::from_polar(1.0, 0.7 * k), C64::new(0.1 * k, 0.05) * m.norm() / (dim as f64).sqrt())
        };
        let shifted = m * rot + DMatrix::identity(dim, dim) * shift;
        if let Some(schur) = Schur::try_new(shifted, SCHUR_EPS, schur_iterations(dim)) {
            let (_, t) = schur.unpack();
            return Ok(quasi_triangular_eigenvalues(&t).into_iter().map(|z| (z - shift) / rot).collect());
        }
    }
    Err(Error::NoConvergence(format!("Schur decomposition of a {dim}x{dim} matrix")))
}

fn schur_iterations(dim: usize) -> usize {
    1000 * dim.max(1)
}

/// Eigenvalues of an upper quasi-triangular matrix, solving any remaining
/// 2x2 diagonal blocks directly.
fn quasi_triangular_eigenvalues(t: &DMatrix<C64>) -> Vec<C64> {
    let n = t.nrows();
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        let split = k + 1 == n || t[(k + 1, k)].norm() <= SCHUR_EPS * (t[(k, k)].norm() + t[(k + 1, k + 1)].norm());
        if split {
            out.push(t[(k, k)]);
            k += 1;
        } else {
            let (a, b, c, d) = (t[(k, k)], t[(k, k + 1)], t[(k + 1, k)], t[(k + 1, k + 1)]);
            let half_tr = (a + d) / 2.0;
            let disc = (((a - d) / 2.0).powu(2) + b * c).sqrt();
            out.push(half_tr + disc);
            out.push(half_tr - disc);
            k += 2;
        }
    }
    out
}

/// Single-linkage clustering of eigenvalues in the complex plane. Two values
/// are linked when their distance is strictly below `tol`; each cluster is
/// represented by its mean. Levels are sorted like eigenvalues.
pub fn group_levels(eigs: &[C64], tol: f64) -> Vec<Level> {
    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    // Sorting by real part lets the inner loop stop once the gap in the real
    // part alone reaches the threshold.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eigs[i].re.total_cmp(&eigs[j].re));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if eigs[j].re - eigs[i].re >= tol {
                break;
            }
            if (eigs[i] - eigs[j]).norm() < tol {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut sums: std::collections::BTreeMap<usize, (C64, usize)> = Default::default();
    for i in 0..n {
        let r = find(&mut parent, i);
        let e = sums.entry(r).or_insert((C64::new(0.0, 0.0), 0));
        e.0 += eigs[i];
        e.1 += 1;
    }
    let mut levels: Vec<Level> = sums
        .into_values()
        .map(|(s, m)| Level { value: s / m as f64, multiplicity: m })
        .collect();
    levels.sort_by(|x, y| x.value.re.total_cmp(&y.value.re).then(x.value.im.total_cmp(&y.value.im)));
    levels
}

/// Eigenvalues of the Hamiltonian restricted to `magnons` down spins.
pub fn sector_eigenvalues(p: &ModelParams, magnons: usize) -> Result<Vec<C64>> {
    if magnons > p.n_sites {
        return Err(Error::InvalidParams(format!("{magnons} magnons on {} sites", p.n_sites)));
    }
    let block = pauli_terms(p.couplings(), p.n_sites)?.sector_block(magnons);
    eigenvalues(&block, p.regime.is_hermitian())
}

/// Full Hamiltonian spectrum assembled from all magnetization sectors.
pub fn sector_spectrum(p: &ModelParams) -> Result<SpectrumResult> {
    let parts: Result<Vec<Vec<C64>>> = (0..=p.n_sites).into_par_iter().map(|m| sector_eigenvalues(p, m)).collect();
    Ok(SpectrumResult::from_eigenvalues(parts?.into_iter().flatten().collect()))
}

/// Lowest energy of a hermitian-regime Hamiltonian and the magnon number of
/// the sector where it occurs (the smallest such number on ties within
/// `1e-10`).
pub fn ground_state(p: &ModelParams) -> Result<(f64, usize)> {
    if !p.regime.is_hermitian() {
        return Err(Error::InvalidParams("ground state requires a hermitian regime".into()));
    }
    let mins: Result<Vec<f64>> = (0..=p.n_sites)
        .into_par_iter()
        .map(|m| Ok(sector_eigenvalues(p, m)?.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)))
        .collect();
    let mins = mins?;
    let e0 = mins.iter().copied().fold(f64::INFINITY, f64::min);
    let m0 = mins.iter().position(|&e| e <= e0 + 1e-10 * e0.abs().max(1.0)).unwrap_or(0);
    Ok((e0, m0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealityScanResult {
    pub eta: f64,
    pub n_sites: usize,
    pub a_grid: Vec<f64>,
    pub all_real_flags: Vec<bool>,
    /// Relative imaginary part `max |Im E| / rho(H)` per grid point.
    pub relative_imag: Vec<f64>,
    /// Maximal runs of consecutive all-real grid points as `[start, end]`.
    pub intervals: Vec<(f64, f64)>,
}

/// Grid `0, step, 2 step, ...` up to and including `pi` when it is hit.
pub fn a_grid(a_step: f64) -> Result<Vec<f64>> {
    if !(a_step > 0.0 && a_step.is_finite()) {
        return Err(Error::InvalidParams(format!("grid step {a_step} must be positive")));
    }
    let count = (PI / a_step + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| k as f64 * a_step).collect())
}

/// `max |Im E| / rho(H)` for the nonhermitian Hamiltonian at `(a, eta)`.
pub fn relative_imaginary_part(eta: f64, a: f64, n_sites: usize) -> Result<f64> {
    let terms = pauli_terms(Couplings { a: C64::new(a, 0.0), eta: C64::new(eta, 0.0) }, n_sites)?;
    let (mut max_imag, mut radius) = (0.0f64, 0.0f64);
    for m in 0..=n_sites {
        for z in eigenvalues(&terms.sector_block(m), false)? {
            max_imag = max_imag.max(z.im.abs());
            radius = radius.max(z.norm());
        }
    }
    Ok(if radius > 0.0 { max_imag / radius } else { 0.0 })
}

/// Flags every grid point in `[0, pi]` whose spectrum is real.
pub fn reality_scan(eta: f64, n_sites: usize, a_step: f64) -> Result<RealityScanResult> {
    ModelParams::nonhermitian(n_sites, eta, 0.0)?;
    let a_grid = a_grid(a_step)?;
    let relative_imag: Result<Vec<f64>> =
        a_grid.par_iter().map(|&a| relative_imaginary_part(eta, a, n_sites)).collect();
    let relative_imag = relative_imag?;
    let all_real_flags: Vec<bool> = relative_imag.iter().map(|&r| r <= REALITY_RTOL).collect();
    let intervals = flagged_runs(&a_grid, &all_real_flags);
    Ok(RealityScanResult { eta, n_sites, a_grid, all_real_flags, relative_imag, intervals })
}

/// Maximal runs of consecutive flagged grid points as `[start, end]`.
pub fn flagged_runs(grid: &[f64], flags: &[bool]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, &f) in flags.iter().enumerate() {
        match (f, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                out.push((grid[s], grid[i - 1]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((grid[s], grid[flags.len() - 1]));
    }
    out
}

/// `[0, eta/2] U [(pi-eta)/2, (pi+eta)/2] U [pi-eta/2, pi]`, overlapping pieces
/// merged.
pub fn predicted_real_intervals(eta: f64) -> Vec<(f64, f64)> {
    let raw = [(0.0, eta / 2.0), ((PI - eta) / 2.0, (PI + eta) / 2.0), (PI - eta / 2.0, PI)];
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in raw {
        match out.last_mut() {
            Some(last) if lo <= last.1 => last.1 = last.1.max(hi),
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// Largest endpoint deviation between two interval lists of equal length, or
/// `None` when the counts differ. The last grid point stands in for `pi`.
pub fn interval_deviation(detected: &[(f64, f64)], predicted: &[(f64, f64)], grid_end: f64) -> Option<f64> {
    if detected.len() != predicted.len() {
        return None;
    }
    let clamp = |x: f64| x.min(grid_end);
    Some(detected.iter().zip(predicted).fold(0.0f64, |m, (d, p)| {
        m.max((d.0 - clamp(p.0)).abs()).max((d.1 - clamp(p.1)).abs())
    }))
}
