use thiserror::Error;

/// Errors surfaced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change over bracket [{lo}, {hi}]")]
    Bracket { lo: f64, hi: f64 },

    #[error("quadrature did not converge: error estimate {best_err:.3e} > requested {requested:.3e}")]
    Accuracy { best_err: f64, requested: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not Hermitian (max asymmetry {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("ill-conditioned matrix: condition estimate {0:.3e}")]
    IllConditioned(f64),

    #[error("eigensolver failed to converge")]
    EigenNonConvergence,

    #[error("wavenumber {kappa} within {dist:.3e} of the branch point")]
    BranchPoint { kappa: f64, dist: f64 },

    #[error("singular input: {0}")]
    Singular(String),

    #[error("wavenumber grid too narrow: edge-to-peak magnitude ratio {0:.3e} exceeds 1e-8")]
    GridTooNarrow(f64),

    #[error("kernel is not positive semidefinite: eigenvalue {0:.3e}")]
    NotPsd(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
