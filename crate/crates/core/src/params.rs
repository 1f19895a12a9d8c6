//! Model parameters and the three coupling regimes.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Below this |sin(eta)| the R-matrix normalisation blows up.
pub const SIN_ETA_GUARD: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Real anisotropy, purely imaginary inhomogeneity `a = i b` (gapless).
    RealEtaHermitian,
    /// Imaginary anisotropy `eta = i gamma`, real inhomogeneity (gapped).
    ImagEtaHermitian,
    /// Real anisotropy and real inhomogeneity.
    Nonhermitian,
}

impl Regime {
    pub fn is_hermitian(self) -> bool {
        !matches!(self, Regime::Nonhermitian)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::RealEtaHermitian => "real-eta",
            Regime::ImagEtaHermitian => "imag-eta",
            Regime::Nonhermitian => "nonhermitian",
        })
    }
}

/// Raw complex couplings `(a, eta)` without any regime constraint.
///
/// Everything that is an analytic function of the couplings (R-matrices,
/// transfer matrices, the Hamiltonian) is written against this type so that it
/// can also be probed off the physical parameter lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub a: C64,
    pub eta: C64,
}

impl Couplings {
    pub fn new(a: C64, eta: C64) -> Result<Self> {
        check_sin_eta(eta)?;
        Ok(Self { a, eta })
    }

    /// `sin(eta)`, the R-matrix normalisation.
    pub fn sin_eta(&self) -> C64 {
        self.eta.sin()
    }
}

pub(crate) fn check_sin_eta(eta: C64) -> Result<()> {
    let s = eta.sin().norm();
    if !(s >= SIN_ETA_GUARD) {
        return Err(Error::SingularAnisotropy(s));
    }
    Ok(())
}

/// Chain length and couplings with an explicit regime tag.
///
/// `anisotropy` is `eta` in the two real-anisotropy regimes and `gamma` in the
/// imaginary one. `inhomogeneity` is `b` (with `a = i b`) in the real-eta
/// hermitian regime and `a` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n_sites: usize,
    pub regime: Regime,
    pub anisotropy: f64,
    pub inhomogeneity: f64,
}

impl ModelParams {
    pub fn new(n_sites: usize, regime: Regime, anisotropy: f64, inhomogeneity: f64) -> Result<Self> {
        if !n_sites.is_multiple_of(2) {
            return Err(Error::OddSiteCount(n_sites));
        }
        if n_sites < 4 {
            return Err(Error::TooFewSites { min: 4, got: n_sites });
        }
        if !anisotropy.is_finite() || !inhomogeneity.is_finite() {
            return Err(Error::InvalidParams("non-finite coupling".into()));
        }
        match regime {
            Regime::RealEtaHermitian | Regime::Nonhermitian => {
                if !(anisotropy > 0.0 && anisotropy < PI) {
                    return Err(Error::InvalidParams(format!(
                        "eta = {anisotropy} must lie in (0, pi)"
                    )));
                }
            }
            Regime::ImagEtaHermitian => {
                if !(anisotropy > 0.0) {
                    return Err(Error::InvalidParams(format!("gamma = {anisotropy} must be positive")));
                }
            }
        }
        let p = Self { n_sites, regime, anisotropy, inhomogeneity };
        check_sin_eta(p.eta())?;
        Ok(p)
    }

    /// Real `eta`, inhomogeneity `a = i b`.
    pub fn real_eta(n_sites: usize, eta: f64, b: f64) -> Result<Self> {
        Self::new(n_sites, Regime::RealEtaHermitian, eta, b)
    }

    /// Imaginary `eta = i gamma`, real `a`.
    pub fn imag_eta(n_sites: usize, gamma: f64, a: f64) -> Result<Self> {
        Self::new(n_sites, Regime::ImagEtaHermitian, gamma, a)
    }

    /// Real `eta` and real `a`.
    pub fn nonhermitian(n_sites: usize, eta: f64, a: f64) -> Result<Self> {
        Self::new(n_sites, Regime::Nonhermitian, eta, a)
    }

    /// Half the number of sites, `N` in `2N`.
    pub fn half_sites(&self) -> usize {
        self.n_sites / 2
    }

    pub fn eta(&self) -> C64 {
        match self.regime {
            Regime::ImagEtaHermitian => C64::new(0.0, self.anisotropy),
            _ => C64::new(self.anisotropy, 0.0),
        }
    }

    pub fn a(&self) -> C64 {
        match self.regime {
            Regime::RealEtaHermitian => C64::new(0.0, self.inhomogeneity),
            _ => C64::new(self.inhomogeneity, 0.0),
        }
    }

    pub fn couplings(&self) -> Couplings {
        Couplings { a: self.a(), eta: self.eta() }
    }

    /// Same regime and couplings with a different inhomogeneity value.
    pub fn with_inhomogeneity(&self, value: f64) -> Self {
        Self { inhomogeneity: value, ..*self }
    }

    pub fn with_sites(&self, n_sites: usize) -> Result<Self> {
        Self::new(n_sites, self.regime, self.anisotropy, self.inhomogeneity)
    }
}

impl fmt::Display for ModelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (an, inh) = match self.regime {
            Regime::RealEtaHermitian => ("eta", "b"),
            Regime::ImagEtaHermitian => ("gamma", "a"),
            Regime::Nonhermitian => ("eta", "a"),
        };
        write!(
            f,
            "{} 2N={} {}={} {}={}",
            self.regime, self.n_sites, an, self.anisotropy, inh, self.inhomogeneity
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes_map_to_complex_couplings() {
        let p = ModelParams::real_eta(4, 1.0, 1.0).unwrap();
        assert_eq!(p.a(), C64::new(0.0, 1.0));
        assert_eq!(p.eta(), C64::new(1.0, 0.0));
        let p = ModelParams::imag_eta(4, 1.0, 1.0).unwrap();
        assert_eq!(p.a(), C64::new(1.0, 0.0));
        assert_eq!(p.eta(), C64::new(0.0, 1.0));
        assert_eq!(p.half_sites(), 2);
    }

    #[test]
    fn validation() {
        assert_eq!(ModelParams::real_eta(5, 1.0, 1.0), Err(Error::OddSiteCount(5)));
        assert!(matches!(ModelParams::real_eta(2, 1.0, 1.0), Err(Error::TooFewSites { .. })));
        assert!(ModelParams::real_eta(4, 0.0, 1.0).is_err());
        assert!(ModelParams::real_eta(4, PI, 1.0).is_err());
        assert!(ModelParams::imag_eta(4, -1.0, 1.0).is_err());
        assert!(matches!(
            Couplings::new(C64::new(0.3, 0.0), C64::new(0.0, 0.0)),
            Err(Error::SingularAnisotropy(_))
        ));
    }
}
