//! Pauli embeddings, the R-matrix, and residual checks of its identities.
//!
//! A tensor factor is addressed either by a 1-based *site* (public Pauli
//! embedding, matching the physical chain labels) or by a 0-based *position*
//! (the internal helpers, where position 0 is the slowest index). With `n`
//! factors, position `p` lives in bit `n - 1 - p` of a basis index.

use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::params::check_sin_eta;
use crate::{Error, Result, C64};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];
}

pub fn pauli(axis: Axis) -> Matrix2<C64> {
    match axis {
        Axis::X => Matrix2::new(ZERO, ONE, ONE, ZERO),
        Axis::Y => Matrix2::new(ZERO, -I, I, ZERO),
        Axis::Z => Matrix2::new(ONE, ZERO, ZERO, -ONE),
    }
}

#[inline]
pub(crate) fn bit_shift(n_factors: usize, position: usize) -> usize {
    n_factors - 1 - position
}

/// Dense complex operator on `sites` spin-1/2 factors.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    sites: usize,
    data: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn from_matrix(sites: usize, data: DMatrix<C64>) -> Self {
        let dim = 1usize << sites;
        assert_eq!(data.shape(), (dim, dim), "operator on {sites} sites must be {dim}x{dim}");
        Self { sites, data }
    }

    pub fn identity(sites: usize) -> Self {
        let dim = 1usize << sites;
        Self { sites, data: DMatrix::identity(dim, dim) }
    }

    pub fn zeros(sites: usize) -> Self {
        let dim = 1usize << sites;
        Self { sites, data: DMatrix::zeros(dim, dim) }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn matrix_mut(&mut self) -> &mut DMatrix<C64> {
        &mut self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { sites: self.sites, data: &self.data * factor }
    }

    pub fn adjoint(&self) -> Self {
        Self { sites: self.sites, data: self.data.adjoint() }
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.data)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(&self.data - &other.data))
    }

    pub fn commutator(&self, other: &Self) -> Self {
        Self { sites: self.sites, data: &self.data * &other.data - &other.data * &self.data }
    }

    /// max |H - H^dagger| over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        max_abs(&(&self.data - self.data.adjoint()))
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix { sites: self.sites, data: &self.data * &rhs.data }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix { sites: self.sites, data: &self.data + &rhs.data }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: Self) -> OperatorMatrix {
        OperatorMatrix { sites: self.sites, data: &self.data - &rhs.data }
    }
}

pub(crate) fn max_abs<R: nalgebra::Dim, Cc: nalgebra::Dim, S>(m: &nalgebra::Matrix<C64, R, Cc, S>) -> f64
where
    S: nalgebra::RawStorage<C64, R, Cc>,
{
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// 4x4 operator on two factors, basis `|00>, |01>, |10>, |11>` with the first
/// factor slow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSiteMatrix(pub Matrix4<C64>);

impl TwoSiteMatrix {
    pub fn identity() -> Self {
        Self(Matrix4::identity())
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    /// The same operator with its two factors exchanged, `P O P`.
    pub fn swapped(&self) -> Self {
        let p = permutation().0;
        Self(p * self.0 * p)
    }

    /// Partial transpose in the first factor.
    pub fn transpose_first(&self) -> Self {
        let mut out = Matrix4::zeros();
        for a in 0..2 {
            for c in 0..2 {
                for b in 0..2 {
                    for d in 0..2 {
                        out[(2 * a + c, 2 * b + d)] = self.0[(2 * b + c, 2 * a + d)];
                    }
                }
            }
        }
        Self(out)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_abs(&(self.0 - other.0))
    }
}

/// Embed a single-site operator on `position` of an `n_factors` product space.
pub fn embed_one_site(op: &Matrix2<C64>, position: usize, n_factors: usize) -> DMatrix<C64> {
    let dim = 1usize << n_factors;
    let shift = bit_shift(n_factors, position);
    let mut out = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let b = (s >> shift) & 1;
        for r in 0..2 {
            let v = op[(r, b)];
            if v != ZERO {
                let t = (s & !(1 << shift)) | (r << shift);
                out[(t, s)] += v;
            }
        }
    }
    out
}

/// Embed a two-site operator whose first factor acts on `first` and second on
/// `second` (positions, any order, distinct).
pub fn embed_two_site(op: &TwoSiteMatrix, first: usize, second: usize, n_factors: usize) -> DMatrix<C64> {
    assert_ne!(first, second);
    let dim = 1usize << n_factors;
    let (s1, s2) = (bit_shift(n_factors, first), bit_shift(n_factors, second));
    let mask = !((1usize << s1) | (1usize << s2));
    let mut out = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        let col = 2 * ((s >> s1) & 1) + ((s >> s2) & 1);
        for row in 0..4 {
            let v = op.0[(row, col)];
            if v != ZERO {
                let t = (s & mask) | ((row >> 1) << s1) | ((row & 1) << s2);
                out[(t, s)] += v;
            }
        }
    }
    out
}

/// `m <- m * embed_two_site(op, first, second)` without materialising the
/// embedding.
pub(crate) fn right_mul_two_site(m: &mut DMatrix<C64>, op: &TwoSiteMatrix, first: usize, second: usize, n_factors: usize) {
    let dim = 1usize << n_factors;
    debug_assert_eq!(m.ncols(), dim);
    let (s1, s2) = (bit_shift(n_factors, first), bit_shift(n_factors, second));
    let mask = !((1usize << s1) | (1usize << s2));
    let src = m.clone();
    for s in 0..dim {
        let col = 2 * ((s >> s1) & 1) + ((s >> s2) & 1);
        let base = s & mask;
        let mut acc = nalgebra::DVector::<C64>::zeros(m.nrows());
        for row in 0..4 {
            let v = op.0[(row, col)];
            if v != ZERO {
                let t = base | ((row >> 1) << s1) | ((row & 1) << s2);
                acc.axpy(v, &src.column(t), ONE);
            }
        }
        m.set_column(s, &acc);
    }
}

/// Pauli matrix `axis` on 1-based `site` of an `n_sites`-site chain.
pub fn pauli_embed(axis: Axis, site: usize, n_sites: usize) -> Result<OperatorMatrix> {
    if !n_sites.is_multiple_of(2) {
        return Err(Error::OddSiteCount(n_sites));
    }
    if n_sites < 2 {
        return Err(Error::TooFewSites { min: 2, got: n_sites });
    }
    if site == 0 || site > n_sites {
        return Err(Error::SiteOutOfRange { site, n_sites });
    }
    Ok(OperatorMatrix::from_matrix(n_sites, embed_one_site(&pauli(axis), site - 1, n_sites)))
}

pub fn permutation() -> TwoSiteMatrix {
    let mut p = Matrix4::zeros();
    p[(0, 0)] = ONE;
    p[(1, 2)] = ONE;
    p[(2, 1)] = ONE;
    p[(3, 3)] = ONE;
    TwoSiteMatrix(p)
}

/// Scalar of the unitarity relation, `-sin(u+eta) sin(u-eta) / sin^2 eta`.
pub fn phi(u: C64, eta: C64) -> C64 {
    let s = eta.sin();
    -(u + eta).sin() * (u - eta).sin() / (s * s)
}

/// Trigonometric six-vertex R-matrix normalised by `sin(eta)`.
pub fn r_matrix(u: C64, eta: C64) -> Result<TwoSiteMatrix> {
    check_sin_eta(eta)?;
    let s = eta.sin();
    let diag = (u + eta).sin() / s;
    let mid = u.sin() / s;
    let mut r = Matrix4::zeros();
    r[(0, 0)] = diag;
    r[(3, 3)] = diag;
    r[(1, 1)] = mid;
    r[(2, 2)] = mid;
    r[(1, 2)] = ONE;
    r[(2, 1)] = ONE;
    Ok(TwoSiteMatrix(r))
}

/// `d R / d u`; the off-diagonal exchange entries are constant and drop out.
pub fn r_matrix_derivative(u: C64, eta: C64) -> Result<TwoSiteMatrix> {
    check_sin_eta(eta)?;
    let s = eta.sin();
    let diag = (u + eta).cos() / s;
    let mid = u.cos() / s;
    let mut r = Matrix4::zeros();
    r[(0, 0)] = diag;
    r[(3, 3)] = diag;
    r[(1, 1)] = mid;
    r[(2, 2)] = mid;
    Ok(TwoSiteMatrix(r))
}

/// Max-entry residual of `R12 R13 R23 - R23 R13 R12` on three factors.
pub fn verify_ybe(u1: C64, u2: C64, u3: C64, eta: C64) -> Result<f64> {
    let r12 = embed_two_site(&r_matrix(u1 - u2, eta)?, 0, 1, 3);
    let r13 = embed_two_site(&r_matrix(u1 - u3, eta)?, 0, 2, 3);
    let r23 = embed_two_site(&r_matrix(u2 - u3, eta)?, 1, 2, 3);
    Ok(ybe_residual(&r12, &r13, &r23))
}

pub(crate) fn ybe_residual(r12: &DMatrix<C64>, r13: &DMatrix<C64>, r23: &DMatrix<C64>) -> f64 {
    let lhs = r12 * r13 * r23;
    let rhs = r23 * r13 * r12;
    max_abs(&(lhs - rhs))
}

/// Residuals of the four R-matrix identities at one spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RPropertyReport {
    /// `|R(0) - P|`.
    pub initial_condition: f64,
    /// `|R_{0j}(u) R_{j0}(-u) - phi(u) id|`.
    pub unitarity: f64,
    /// `|R(u) + sigma^y_0 R^{t_0}(-u-eta) sigma^y_0|`.
    pub crossing: f64,
    /// max of `|R_{0j} - R_{j0}|` and `|R - R^{t_0 t_j}|`.
    pub pt_symmetry: f64,
}

impl RPropertyReport {
    pub fn max(&self) -> f64 {
        self.initial_condition.max(self.unitarity).max(self.crossing).max(self.pt_symmetry)
    }
}

pub fn verify_r_properties(u: C64, eta: C64) -> Result<RPropertyReport> {
    let r = r_matrix(u, eta)?;
    let initial_condition = r_matrix(ZERO, eta)?.max_abs_diff(&permutation());

    let unit = r.0 * r_matrix(-u, eta)?.swapped().0;
    let unitarity = max_abs(&(unit - Matrix4::identity() * phi(u, eta)));

    let sy0 = pauli(Axis::Y).kronecker(&Matrix2::identity());
    let crossed = -(sy0 * r_matrix(-u - eta, eta)?.transpose_first().0 * sy0);
    let crossing = max_abs(&(r.0 - crossed));

    let pt_symmetry = r.max_abs_diff(&r.swapped()).max(max_abs(&(r.0 - r.0.transpose())));

    Ok(RPropertyReport { initial_condition, unitarity, crossing, pt_symmetry })
}

/// Residual of `[P_{21}, P_{20}] = (i/2) s_2 . (s_1 x s_0)` on three factors,
/// with spaces 0, 1, 2 at positions 0, 1, 2.
pub fn verify_permutation_commutator() -> f64 {
    let (lhs, rhs) = permutation_commutator_sides();
    max_abs(&(lhs - rhs))
}

pub(crate) fn permutation_commutator_sides() -> (DMatrix<C64>, DMatrix<C64>) {
    let p = permutation();
    let p21 = embed_two_site(&p, 2, 1, 3);
    let p20 = embed_two_site(&p, 2, 0, 3);
    let lhs = &p21 * &p20 - &p20 * &p21;
    let s = |axis: Axis, pos: usize| embed_one_site(&pauli(axis), pos, 3);
    let chirality = scalar_chirality(|axis| s(axis, 2), |axis| s(axis, 1), |axis| s(axis, 0));
    (lhs, chirality * C64::new(0.0, 0.5))
}

/// `A . (B x C)` for vector operators given component-wise.
pub(crate) fn scalar_chirality(
    a: impl Fn(Axis) -> DMatrix<C64>,
    b: impl Fn(Axis) -> DMatrix<C64>,
    c: impl Fn(Axis) -> DMatrix<C64>,
) -> DMatrix<C64> {
    use Axis::*;
    let term = |x: Axis, y: Axis, z: Axis| a(x) * (b(y) * c(z) - b(z) * c(y));
    term(X, Y, Z) + term(Y, Z, X) + term(Z, X, Y)
}
