use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("singular anisotropy: |sin(eta)| = {0:e} is below 1e-10")]
    SingularAnisotropy(f64),

    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },

    #[error("number of sites must be even, got {0}")]
    OddSiteCount(usize),

    #[error("need at least {min} sites, got {got}")]
    TooFewSites { min: usize, got: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("resonant inhomogeneity: phi(2a) = {0:e} vanishes")]
    ResonantInhomogeneity(f64),

    #[error("spectral parameter collides with Bethe root {index}")]
    RootPole { index: usize },

    #[error("Bethe roots {first} and {second} coincide")]
    RootCollision { first: usize, second: usize },

    #[error("kernel pole at {0}")]
    KernelPole(String),

    #[error("parametrization {found} does not match the {regime} regime")]
    ParametrizationMismatch { found: String, regime: String },

    #[error("matrix dimension {dim} exceeds the dense limit {limit}; use magnetization sectors")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("{0} did not converge")]
    NoConvergence(String),
}
