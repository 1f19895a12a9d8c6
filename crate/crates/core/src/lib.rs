//! Numerical laboratory for the integrable anisotropic J1-J2 spin chain with
//! next-nearest-neighbour and scalar-chirality couplings.
//!
//! The crate covers the full pipeline:
//!
//! * [`spin_algebra`]: Pauli embeddings, the six-vertex R-matrix and its
//!   derivative, and residual checks of the R-matrix identities.
//! * [`transfer`]: inhomogeneous monodromy and transfer matrices, and the
//!   Hamiltonian rebuilt from the transfer-matrix logarithmic derivative.
//! * [`hamiltonian`]: the Hamiltonian written directly as a sum of Pauli
//!   strings, its isotropic limit, and the parameter-reflection identity.
//! * [`spectrum`]: dense diagonalization, level grouping and the reality scan
//!   of the non-hermitian regime.
//! * [`bethe`]: Bethe ansatz equations in every parametrization, root solvers
//!   and completeness matching against exact diagonalization.
//! * [`thermo`]: thermodynamic-limit root densities, ground-state energy
//!   density, two-spinon excitations and the excitation gap.
//!
//! Basis convention used everywhere: `|0>` is spin up, `|1>` spin down, and in a
//! tensor product the first factor is the slowest-varying index.

pub mod bethe;
mod error;
pub mod hamiltonian;
pub mod params;
pub mod quad;
pub mod spectrum;
pub mod spin_algebra;
pub mod thermo;
pub mod transfer;

pub use error::{Error, Result};
pub use params::{Couplings, ModelParams, Regime};

pub use num_complex::Complex64 as C64;
