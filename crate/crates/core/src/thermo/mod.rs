//! Thermodynamic-limit observables of the two hermitian regimes: kernels,
//! ground-state root density and energy density, two-hole (spinon)
//! excitations and the excitation gap.
//!
//! Functions take [`ModelParams`] for the couplings only; the chain length is
//! ignored. Fourier conventions: `f~(w) = int f(u) e^{i w u} du` on the real
//! line (real eta) and `f~(w) = int_{-pi}^{pi} f(u) e^{i w u} du` with integer
//! `w` (imaginary eta).

mod density;
mod energy;
mod excitation;
mod gap;
mod kernel;

use serde::{Deserialize, Serialize};

use crate::{Error, ModelParams, Regime, Result};

pub use density::{
    density_normalization, ground_density_profile, integral_equation_residual, rho_ground, rho_ground_transform,
    solve_integral_equation, DensityProfile, IntegralEquationCheck,
};
pub use energy::ground_energy_density;
pub use excitation::{
    count_arches, delta_rho_regular, dispersion_curve, hole_momentum, hole_window, momentum_uniform_holes, single_hole_energy,
    spinon_energy, spinon_momentum,
    DispersionCurve, DispersionMode, DispersionPoint, HoleExcitation,
};
pub use gap::{gap, gap_branch_value, GapBranch, GapResult};
pub use kernel::{kernel_a, kernel_a_transform, series_cutoff, sinh_ratio};

/// Couplings of a hermitian regime in thermodynamic-limit form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThermoCouplings {
    /// Real `eta` in `(0, pi)`, `a = i b`.
    RealEta { eta: f64, b: f64 },
    /// `eta = i gamma`, real `a`.
    ImagEta { gamma: f64, a: f64 },
}

impl ThermoCouplings {
    pub fn from_params(p: &ModelParams) -> Result<Self> {
        match p.regime {
            Regime::RealEtaHermitian => Ok(Self::RealEta { eta: p.anisotropy, b: p.inhomogeneity }),
            Regime::ImagEtaHermitian => Ok(Self::ImagEta { gamma: p.anisotropy, a: p.inhomogeneity }),
            Regime::Nonhermitian => {
                Err(Error::InvalidParams("thermodynamic-limit observables need a hermitian regime".into()))
            }
        }
    }

    /// Prefactor `c` of the single-hole energy `eps(u) = c rho_g(u)`.
    pub fn hole_energy_scale(&self) -> f64 {
        match *self {
            Self::RealEta { eta, b } => 4.0 * std::f64::consts::PI * ((4.0 * b).cosh() - (2.0 * eta).cos()) / eta.sin(),
            Self::ImagEta { gamma, a } => {
                4.0 * std::f64::consts::PI * ((2.0 * gamma).cosh() - (4.0 * a).cos()) / gamma.sinh()
            }
        }
    }
}
