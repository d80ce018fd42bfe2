//! Water-filling capacity over spatial spectral densities, and its discrete
//! covariance counterpart (Kuhn–Tucker allocation).

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::{eigh, HermitianMatrix};
use crate::real::{from_usize, lit, Real};
use crate::spectrum::{SpectralDensity, WavenumberGrid};

/// Noise model on the wavenumber axis.
#[derive(Debug, Clone)]
pub enum NoiseModel<T> {
    /// Flat SSD value (σ²/√(2π) for white noise of variance σ²).
    White(T),
    Tabulated(SpectralDensity<T>),
}

/// Output of [`waterfill_ssd`].
#[derive(Debug, Clone)]
pub struct WaterfillResult<T> {
    /// allocated source SSD
    pub s_j: SpectralDensity<T>,
    /// water level w = 1/(2πλ_mult)
    pub water_level: T,
    /// Lagrange multiplier of the power constraint
    pub lagrange: T,
    /// nats per meter
    pub capacity: T,
}

/// Bins where |G| collapses below this fraction of its peak are treated as
/// unusable: their equivalent noise is clamped to the value this floor
/// implies, which keeps every density finite while guaranteeing the
/// water-filling never allocates there.
const G_FLOOR: f64 = 1e-14;

/// Equivalent-noise SSD S_N' = S_N/(2π|G|²) on the grid of `g_mag` (|G|).
pub fn equivalent_noise<T: Real>(
    noise: &NoiseModel<T>,
    g_mag: &SpectralDensity<T>,
) -> Result<SpectralDensity<T>> {
    let n = g_mag.grid.len();
    let peak = g_mag.values.iter().copied().fold(T::zero(), T::max);
    if peak == T::zero() {
        return Err(Error::Domain("transfer spectrum is identically zero".into()));
    }
    let floor = peak * lit(G_FLOOR);
    let two_pi = lit::<T>(2.0) * T::PI();
    let noise_at = |i: usize| -> Result<T> {
        match noise {
            NoiseModel::White(v) => Ok(*v),
            NoiseModel::Tabulated(sd) => {
                if sd.grid != g_mag.grid {
                    return Err(Error::Shape(
                        "noise and transfer spectra use different grids".into(),
                    ));
                }
                Ok(sd.values[i])
            }
        }
    };
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let g = g_mag.values[i].max(floor);
        values.push(noise_at(i)? / (two_pi * g * g));
    }
    SpectralDensity::new(g_mag.grid.clone(), values)
}

/// Trapezoidal quadrature weights for a uniform grid.
fn trap_weights<T: Real>(grid: &WavenumberGrid<T>) -> Vec<T> {
    let n = grid.len();
    let dk = grid.spacing();
    (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                dk * lit(0.5)
            } else {
                dk
            }
        })
        .collect()
}

/// Water-filling over the equivalent noise: S_J = (w − S_N')⁺ with the level
/// w found by bisection so that ∫S_J dκ = P.
pub fn waterfill_ssd<T: Real>(
    noise_eq: &SpectralDensity<T>,
    power: T,
) -> Result<WaterfillResult<T>> {
    if !(power > T::zero()) || !power.is_finite() {
        return Err(Error::Domain(format!("power must be positive, got {power}")));
    }
    if noise_eq.values.iter().any(|&v| !(v > T::zero())) {
        return Err(Error::Domain("equivalent noise must be positive".into()));
    }
    let weights = trap_weights(&noise_eq.grid);
    let allocated = |w: T| -> T {
        noise_eq
            .values
            .iter()
            .zip(&weights)
            .map(|(&s, &wt)| (w - s).max(T::zero()) * wt)
            .sum()
    };
    let floor = noise_eq.values.iter().copied().fold(T::infinity(), T::min);
    let mut lo = floor;
    // all the power stacked over the narrowest possible support; the factor 4
    // keeps the bound strict even when the minimum sits on a half-weight
    // edge bin
    let mut hi = floor + lit::<T>(4.0) * power / noise_eq.grid.spacing();
    debug_assert!(allocated(hi) >= power);
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if allocated(mid) < power {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo) <= lit::<T>(1e-15) * hi.max(T::one()) {
            break;
        }
    }
    let w = (lo + hi) * lit(0.5);
    let got = allocated(w);
    if (got - power).abs() > lit::<T>(1e-8) * power {
        return Err(Error::Accuracy {
            best_err: (got - power).abs().to_f64().unwrap_or(f64::NAN),
            requested: (lit::<T>(1e-8) * power).to_f64().unwrap_or(f64::NAN),
        });
    }
    let s_j_values: Vec<T> = noise_eq
        .values
        .iter()
        .map(|&s| (w - s).max(T::zero()))
        .collect();
    let s_j = SpectralDensity::new(noise_eq.grid.clone(), s_j_values)?;
    let capacity = capacity_ssd(&s_j, noise_eq)?;
    Ok(WaterfillResult {
        s_j,
        water_level: w,
        lagrange: T::one() / (lit::<T>(2.0) * T::PI() * w),
        capacity,
    })
}

/// Capacity (1/2π)∫log(1 + S_J/S_N')dκ in nats per meter.
pub fn capacity_ssd<T: Real>(
    s_j: &SpectralDensity<T>,
    noise_eq: &SpectralDensity<T>,
) -> Result<T> {
    if s_j.grid != noise_eq.grid {
        return Err(Error::Shape("allocation and noise grids differ".into()));
    }
    let weights = trap_weights(&s_j.grid);
    let total: T = s_j
        .values
        .iter()
        .zip(&noise_eq.values)
        .zip(&weights)
        .map(|((&a, &s), &wt)| (T::one() + a / s).ln() * wt)
        .sum();
    Ok(total / (lit::<T>(2.0) * T::PI()))
}

/// Discrete Kuhn–Tucker power allocation against noise covariance `k_n`:
/// diagonalize, fill A_ii = (v − Λ_ii)⁺ with tr(A) = n·P0, and return
/// K_E = Q·A·Q^H together with the mutual information Σ log(1 + A_ii/Λ_ii).
pub fn kkt_covariance_allocate<T: Real>(
    k_n: &HermitianMatrix<T>,
    power_per_sample: T,
    n_samples: usize,
) -> Result<(HermitianMatrix<T>, T)> {
    if !(power_per_sample > T::zero()) {
        return Err(Error::Domain("power per sample must be positive".into()));
    }
    let dec = eigh(k_n)?;
    let dim = dec.dim;
    let lam_min = dec.eigenvalues[dim - 1];
    if !(lam_min > T::zero()) {
        return Err(Error::NotPositiveDefinite(format!(
            "noise covariance has eigenvalue {lam_min}"
        )));
    }
    let budget = from_usize::<T>(n_samples) * power_per_sample;
    let allocated = |v: T| -> T {
        dec.eigenvalues
            .iter()
            .map(|&l| (v - l).max(T::zero()))
            .sum()
    };
    let mut lo = lam_min;
    let mut hi = dec.eigenvalues[0] + budget;
    for _ in 0..200 {
        let mid = (lo + hi) * lit(0.5);
        if allocated(mid) < budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let v = (lo + hi) * lit(0.5);
    let a: Vec<T> = dec
        .eigenvalues
        .iter()
        .map(|&l| (v - l).max(T::zero()))
        .collect();
    let mi: T = a
        .iter()
        .zip(&dec.eigenvalues)
        .map(|(&ai, &li)| (T::one() + ai / li).ln())
        .sum();
    // K_E = Q A Q^H
    let k_e = HermitianMatrix::from_fn(dim, |i, j| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..dim {
            acc += dec.eigenvectors[i * dim + k] * a[k] * dec.eigenvectors[j * dim + k].conj();
        }
        acc
    });
    Ok((k_e, mi))
}
