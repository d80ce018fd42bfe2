//! Mercer-expansion route to mutual information: analytic eigenmodes of the
//! exponential autocorrelation kernel, a Nyström solver for general kernels,
//! and per-mode water levels against white noise.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::find_root;
use crate::real::{from_usize, lit, Real};

/// One Mercer mode: eigenvalue, dispersion frequency (analytic kernels only),
/// and eigenfunction samples on the owner's grid.
#[derive(Debug, Clone)]
pub struct MercerMode<T> {
    pub lambda: T,
    pub omega: Option<T>,
    pub phi: Vec<T>,
}

/// A truncated Mercer expansion of a covariance kernel on [0, L].
#[derive(Debug, Clone)]
pub struct MercerSpectrum<T> {
    pub modes: Vec<MercerMode<T>>,
    /// midpoint sample grid the eigenfunctions are tabulated on
    pub grid: Vec<T>,
    pub length: T,
    /// full kernel trace ∫R(r,r)dr, for truncation bounds
    pub trace: T,
}

impl<T: Real> MercerSpectrum<T> {
    pub fn lambdas(&self) -> Vec<T> {
        self.modes.iter().map(|m| m.lambda).collect()
    }
}

/// Exponential autocorrelation R(Δ) = P·e^{−α|Δ|} on a segment of length L.
#[derive(Debug, Clone, Copy)]
pub struct ExponentialKernelParams<T> {
    pub power: T,
    pub alpha: T,
    pub length: T,
}

impl<T: Real> ExponentialKernelParams<T> {
    pub fn new(power: T, alpha: T, length: T) -> Result<Self> {
        for (name, v) in [("power", power), ("alpha", alpha), ("length", length)] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self {
            power,
            alpha,
            length,
        })
    }

    /// λ(ω) = 2αP/(α² + ω²)
    pub fn lambda_of(&self, omega: T) -> T {
        lit::<T>(2.0) * self.alpha * self.power / (self.alpha * self.alpha + omega * omega)
    }

    /// Dispersion residual 2·arctan(ω/α) + ωL − kπ; its k-th positive root is
    /// the k-th mode frequency.
    pub fn dispersion(&self, omega: T, k: usize) -> T {
        lit::<T>(2.0) * (omega / self.alpha).atan() + omega * self.length
            - from_usize::<T>(k) * T::PI()
    }
}

/// Solve the dispersion relation for mode k. The residual is increasing and
/// concave on the bracket ((k−1)π/L, kπ/L), so a clamped Newton iteration
/// converges monotonically from the left.
fn mode_frequency<T: Real>(params: &ExponentialKernelParams<T>, k: usize) -> T {
    let lo = from_usize::<T>(k - 1) * T::PI() / params.length;
    let hi = from_usize::<T>(k) * T::PI() / params.length;
    let mut w = (lo + hi) * lit(0.5);
    let two = lit::<T>(2.0);
    for _ in 0..64 {
        let f = params.dispersion(w, k);
        let fp = two * params.alpha / (params.alpha * params.alpha + w * w) + params.length;
        let mut next = w - f / fp;
        if next <= lo {
            next = (w + lo) * lit(0.5);
        }
        if next >= hi {
            next = (w + hi) * lit(0.5);
        }
        if (next - w).abs() <= lit::<T>(1e-16) * w.abs().max(T::one()) {
            return next;
        }
        w = next;
    }
    w
}

/// ∫₀^L (ω cos ωr + α sin ωr)² dr, in closed form.
fn norm_sq<T: Real>(params: &ExponentialKernelParams<T>, omega: T) -> T {
    let l = params.length;
    let a = params.alpha;
    let half = lit::<T>(0.5);
    let s2 = (lit::<T>(2.0) * omega * l).sin() / (lit::<T>(4.0) * omega);
    let sl = (omega * l).sin();
    omega * omega * (l * half + s2) + a * a * (l * half - s2) + a * omega * sl * sl / omega
}

/// First `k_max` analytic Mercer modes of the exponential kernel, with
/// eigenfunctions tabulated on an `n_grid`-point midpoint grid.
///
/// Eigenfunctions are φ_k(r) ∝ ω_k cos(ω_k r) + α sin(ω_k r), normalized to
/// ∫φ² = 1 with φ_k(0) > 0.
pub fn exp_kernel_modes<T: Real>(
    params: &ExponentialKernelParams<T>,
    k_max: usize,
    n_grid: usize,
) -> Result<MercerSpectrum<T>> {
    if k_max == 0 || n_grid == 0 {
        return Err(Error::Shape("need k_max ≥ 1 and a non-empty grid".into()));
    }
    let l = params.length;
    let step = l / from_usize(n_grid);
    let grid: Vec<T> = (0..n_grid)
        .map(|i| step * (from_usize::<T>(i) + lit(0.5)))
        .collect();
    let mut modes = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let omega = mode_frequency(params, k);
        let resid = params.dispersion(omega, k).abs();
        if resid > lit(1e-10) {
            return Err(Error::Accuracy {
                best_err: resid.to_f64().unwrap_or(f64::NAN),
                requested: 1e-10,
            });
        }
        let scale = T::one() / norm_sq(params, omega).sqrt();
        let phi = grid
            .iter()
            .map(|&r| ((omega * r).cos() * omega + (omega * r).sin() * params.alpha) * scale)
            .collect();
        modes.push(MercerMode {
            lambda: params.lambda_of(omega),
            omega: Some(omega),
            phi,
        });
    }
    Ok(MercerSpectrum {
        modes,
        grid,
        length: l,
        trace: params.power * l,
    })
}

/// Nyström discretization: eigen-decompose W^{1/2} R W^{1/2} on an n-point
/// midpoint grid with uniform weights w = L/n. Eigenvalues approximate the
/// kernel's Mercer eigenvalues; eigenvector entries scaled by w^{-1/2}
/// approximate eigenfunction samples.
pub fn nystrom_modes<T: Real>(
    r: impl Fn(T, T) -> T,
    length: T,
    n: usize,
    k_max: usize,
) -> Result<MercerSpectrum<T>> {
    use crate::numerics::{eigh, HermitianMatrix};
    use num_complex::Complex;
    if n == 0 || k_max == 0 || k_max > n {
        return Err(Error::Shape(format!(
            "need 1 ≤ k_max ≤ n, got k_max={k_max}, n={n}"
        )));
    }
    if !(length > T::zero()) {
        return Err(Error::Domain(format!("length must be positive: {length}")));
    }
    let w = length / from_usize(n);
    let grid: Vec<T> = (0..n)
        .map(|i| w * (from_usize::<T>(i) + lit(0.5)))
        .collect();
    let m = HermitianMatrix::from_fn(n, |i, j| {
        let v = (r(grid[i], grid[j]) + r(grid[j], grid[i])) * lit::<T>(0.5) * w;
        Complex::new(v, T::zero())
    });
    let trace = m.trace();
    let dec = eigh(&m)?;
    let l1 = dec.eigenvalues[0];
    if let Some(&worst) = dec
        .eigenvalues
        .iter()
        .find(|&&l| l < -lit::<T>(1e-10) * l1.max(T::zero()))
    {
        return Err(Error::NotPsd(worst.to_f64().unwrap_or(f64::NAN)));
    }
    let root_w = w.sqrt();
    let mut modes = Vec::with_capacity(k_max);
    for k in 0..k_max {
        let mut phi: Vec<T> = (0..n).map(|i| dec.eigenvectors[i * n + k].re / root_w).collect();
        // sign convention: first sample with meaningful magnitude positive
        let peak = phi.iter().fold(T::zero(), |a, &b| a.max(b.abs()));
        if let Some(&lead) = phi.iter().find(|&&v| v.abs() > lit::<T>(0.1) * peak) {
            if lead < T::zero() {
                for v in phi.iter_mut() {
                    *v = -*v;
                }
            }
        }
        modes.push(MercerMode {
            lambda: dec.eigenvalues[k].max(T::zero()),
            omega: None,
            phi,
        });
    }
    Ok(MercerSpectrum {
        modes,
        grid,
        length,
        trace,
    })
}

/// Mutual information Σ_k log(1 + 2λ_k/n0) of the truncated expansion against
/// white noise of density n0/2, plus an upper bound on the truncated tail
/// (log(1+x) ≤ x applied to the trace remainder).
pub fn mercer_mutual_information<T: Real>(
    spectrum: &MercerSpectrum<T>,
    n0: T,
) -> Result<(T, T)> {
    if !(n0 > T::zero()) {
        return Err(Error::Domain(format!("n0 must be positive, got {n0}")));
    }
    let two = lit::<T>(2.0);
    let mut mi = T::zero();
    let mut seen = T::zero();
    for m in &spectrum.modes {
        if m.lambda < T::zero() {
            return Err(Error::NotPsd(m.lambda.to_f64().unwrap_or(f64::NAN)));
        }
        mi += (T::one() + two * m.lambda / n0).ln();
        seen += m.lambda;
    }
    let tail = (spectrum.trace - seen).max(T::zero()) * two / n0;
    Ok((mi, tail))
}

/// Streaming exponential-kernel mutual information: walks the full mode
/// ladder without storing eigenfunctions, truncating once λ_k falls below
/// 1e-12·λ_1. Returns (MI in nats, truncation bound).
pub fn exp_kernel_mutual_information<T: Real>(
    params: &ExponentialKernelParams<T>,
    n0: T,
) -> Result<(T, T)> {
    if !(n0 > T::zero()) {
        return Err(Error::Domain(format!("n0 must be positive, got {n0}")));
    }
    let two = lit::<T>(2.0);
    let lambda1 = params.lambda_of(mode_frequency(params, 1));
    let cutoff = lit::<T>(1e-12) * lambda1;
    // λ(ω) < cutoff once ω > ω_stop; mode count follows from ωL ≈ kπ
    let omega_stop = (two * params.alpha * params.power / cutoff).sqrt();
    let k_stop = ((omega_stop * params.length / T::PI())
        .ceil()
        .to_usize()
        .unwrap_or(usize::MAX))
    .max(1)
        + 1;

    const CHUNK: usize = 1 << 15;
    let ranges: Vec<(usize, usize)> = (1..=k_stop)
        .step_by(CHUNK)
        .map(|lo| (lo, (lo + CHUNK - 1).min(k_stop)))
        .collect();
    // per-chunk partial sums reduced in index order for determinism
    let partials: Vec<(T, T)> = ranges
        .par_iter()
        .map(|&(lo, hi)| {
            let mut mi = T::zero();
            let mut seen = T::zero();
            for k in lo..=hi {
                let lam = params.lambda_of(mode_frequency(params, k));
                mi += (T::one() + two * lam / n0).ln();
                seen += lam;
            }
            (mi, seen)
        })
        .collect();
    let (mi, seen) = partials
        .iter()
        .fold((T::zero(), T::zero()), |(a, b), &(c, d)| (a + c, b + d));
    let tail = (params.power * params.length - seen).max(T::zero()) * two / n0;
    Ok((mi, tail))
}

/// SSD waterfilling capacity of the (infinite-interval) exponential source
/// spectrum against white noise: closed form √(α² + 4αP/n0) − α nats per
/// meter, derived from (1/2π)∫log(1 + 4αP/(n0(α²+κ²)))dκ.
pub fn exp_kernel_ssd_rate<T: Real>(params: &ExponentialKernelParams<T>, n0: T) -> Result<T> {
    if !(n0 > T::zero()) {
        return Err(Error::Domain(format!("n0 must be positive, got {n0}")));
    }
    let a = params.alpha;
    let c = lit::<T>(4.0) * a * params.power / n0;
    Ok((a * a + c).sqrt() - a)
}

/// Finite-interval Mercer rate per meter at L versus the infinite-interval
/// stationary (SSD) rate; the former approaches the latter as L grows.
pub fn mercer_vs_ssd_limit<T: Real>(
    params: &ExponentialKernelParams<T>,
    n0: T,
) -> Result<(T, T)> {
    let (mi, _) = exp_kernel_mutual_information(params, n0)?;
    let ssd = exp_kernel_ssd_rate(params, n0)?;
    Ok((mi / params.length, ssd))
}

// allow `find_root` users downstream to reuse the dispersion bracket
pub fn dispersion_root_bisect<T: Real>(
    params: &ExponentialKernelParams<T>,
    k: usize,
) -> Result<T> {
    let lo = from_usize::<T>(k - 1) * T::PI() / params.length + lit::<T>(1e-300);
    let hi = from_usize::<T>(k) * T::PI() / params.length;
    find_root(
        |w| params.dispersion(w, k),
        crate::numerics::Interval::new(lo, hi)?,
        lit(1e-14),
    )
}
