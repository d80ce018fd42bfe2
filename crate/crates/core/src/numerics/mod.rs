//! Special functions, quadrature, root finding, and a Hermitian eigensolver.
//! Everything here is self-contained and deterministic.

pub mod bessel;
pub mod eigh;
pub mod hermitian;
pub mod quad;
pub mod roots;

pub use bessel::{bessel_j0, bessel_k0, bessel_k1, bessel_y0};
pub use eigh::{eigh, Eigh};
pub use hermitian::HermitianMatrix;
pub use quad::{gauss_legendre, integrate, integrate_panels, integrate_split, QuadValue};
pub use roots::find_root;

use crate::error::{Error, Result};
use crate::real::Real;

/// Finite interval with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain("interval endpoints must be finite".into()));
        }
        if lo >= hi {
            return Err(Error::Domain(format!(
                "interval requires lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn width(&self) -> T {
        self.hi - self.lo
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }
}
