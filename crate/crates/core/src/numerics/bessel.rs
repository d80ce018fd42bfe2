//! Bessel functions J0, Y0, K0, K1.
//!
//! Piecewise evaluation: ascending power series near the origin, Hankel
//! asymptotic expansions for large argument (J0, Y0), and a Chebyshev fit of
//! the exponentially scaled function for K0/K1 at large argument. The
//! Chebyshev tables are generated once at first use from the integral
//! representation √x·eˣ·K_ν(x) = √x ∫₀^∞ e^{−x(cosh t − 1)} cosh(νt) dt,
//! so the module has no baked-in coefficient magic beyond that fit.

use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::numerics::quad::gauss_legendre;
use crate::real::{lit, Real};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_86;

/// series/asymptotic crossover for J0, Y0
const OSC_SPLIT: f64 = 14.0;
/// series/Chebyshev crossover for K0, K1
const K_SPLIT: f64 = 6.0;

/// Bessel function of the first kind, order zero.
pub fn bessel_j0<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() {
        return Err(Error::Domain("bessel_j0 requires finite input".into()));
    }
    let ax = x.abs();
    if ax < lit(OSC_SPLIT) {
        Ok(j0_series(ax))
    } else {
        let (p, q, env, omega) = hankel_parts(ax);
        Ok(env * (p * omega.cos() - q * omega.sin()))
    }
}

/// Bessel function of the second kind (Neumann function), order zero.
pub fn bessel_y0<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_y0 requires x > 0, got {x}"
        )));
    }
    if x < lit(OSC_SPLIT) {
        // (2/π)[(ln(x/2)+γ)J0 + Σ_{k≥1} (−1)^{k+1} H_k (x²/4)^k/(k!)²]
        let z = x * x * lit(0.25);
        let mut term = T::one();
        let mut harmonic = T::zero();
        let mut sum = T::zero();
        for k in 1..200 {
            let kt: T = lit(k as f64);
            term = term * z / (kt * kt);
            harmonic += T::one() / kt;
            let contrib = if k % 2 == 1 {
                term * harmonic
            } else {
                -(term * harmonic)
            };
            sum += contrib;
            if contrib.abs() < sum.abs() * T::epsilon() + lit(1e-300) {
                break;
            }
        }
        let j0 = j0_series(x);
        Ok(lit::<T>(2.0) * T::FRAC_1_PI()
            * (((x * lit(0.5)).ln() + lit(EULER_GAMMA)) * j0 + sum))
    } else {
        let (p, q, env, omega) = hankel_parts(x);
        Ok(env * (p * omega.sin() + q * omega.cos()))
    }
}

/// Modified Bessel function of the second kind, order zero.
pub fn bessel_k0<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_k0 requires x > 0, got {x}"
        )));
    }
    if x <= lit(K_SPLIT) {
        // −(ln(x/2)+γ)·I0 + Σ_{k≥1} H_k (x²/4)^k/(k!)²
        let z = x * x * lit(0.25);
        let mut term = T::one();
        let mut harmonic = T::zero();
        let mut i0 = T::one();
        let mut sum = T::zero();
        for k in 1..200 {
            let kt: T = lit(k as f64);
            term = term * z / (kt * kt);
            harmonic += T::one() / kt;
            i0 += term;
            sum += term * harmonic;
            if term < (i0 + sum) * T::epsilon() {
                break;
            }
        }
        Ok(-((x * lit(0.5)).ln() + lit(EULER_GAMMA)) * i0 + sum)
    } else {
        Ok(k_large(x, &K0_CHEB))
    }
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "bessel_k1 requires x > 0, got {x}"
        )));
    }
    if x <= lit(K_SPLIT) {
        // 1/x + ln(x/2)·I1 − (x/4)·Σ_{k≥0}(H_k + H_{k+1} − 2γ)(x²/4)^k/(k!(k+1)!)
        let z = x * x * lit(0.25);
        let mut term = T::one(); // z^k/(k!(k+1)!)
        let mut h_k = T::zero();
        let mut h_k1 = T::one();
        let mut i1_sum = T::one();
        let mut sum = h_k + h_k1 - lit(2.0 * EULER_GAMMA);
        for k in 1..200 {
            let kt: T = lit(k as f64);
            term = term * z / (kt * (kt + T::one()));
            h_k += T::one() / kt;
            h_k1 += T::one() / (kt + T::one());
            i1_sum += term;
            let contrib = term * (h_k + h_k1 - lit(2.0 * EULER_GAMMA));
            sum += contrib;
            if term < i1_sum * T::epsilon() {
                break;
            }
        }
        let i1 = x * lit::<T>(0.5) * i1_sum;
        Ok(T::one() / x + (x * lit(0.5)).ln() * i1 - x * lit::<T>(0.25) * sum)
    } else {
        Ok(k_large(x, &K1_CHEB))
    }
}

/// Ascending series Σ (−1)^k (x²/4)^k/(k!)², valid for moderate |x|.
fn j0_series<T: Real>(x: T) -> T {
    let z = x * x * lit(0.25);
    let mut term = T::one();
    let mut sum = T::one();
    for k in 1..200 {
        let kt: T = lit(k as f64);
        term = term * z / (kt * kt);
        if k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        if term < T::epsilon() {
            break;
        }
    }
    sum
}

/// Hankel asymptotic pieces for order zero: (P, Q, √(2/πx), x − π/4).
/// Terms a_m = Π(2j−1)²/(m!(8x)^m) summed with alternating signs until they
/// stop decreasing.
fn hankel_parts<T: Real>(x: T) -> (T, T, T, T) {
    let mut p = T::one();
    let mut q = T::zero();
    let mut a = T::one();
    let mut prev = T::infinity();
    for m in 1..80usize {
        let mt: T = lit(m as f64);
        let odd: T = lit((2 * m - 1) as f64);
        a = a * odd * odd / (lit::<T>(8.0) * mt * x);
        if a >= prev || a < lit(1e-18) {
            break;
        }
        prev = a;
        if m % 2 == 1 {
            // contributes to Q with sign (−1)^{(m+1)/2}
            if (m + 1) / 2 % 2 == 1 {
                q -= a;
            } else {
                q += a;
            }
        } else if (m / 2) % 2 == 1 {
            p -= a;
        } else {
            p += a;
        }
    }
    let env = (lit::<T>(2.0) / (T::PI() * x)).sqrt();
    let omega = x - T::FRAC_PI_4();
    (p, q, env, omega)
}

// --- large-argument K0/K1 via Chebyshev fit of √x·eˣ·K_ν(x) in u = 12/x − 1 ---

const CHEB_N: usize = 48;

static K0_CHEB: Lazy<Vec<f64>> = Lazy::new(|| cheb_fit_scaled_k(0));
static K1_CHEB: Lazy<Vec<f64>> = Lazy::new(|| cheb_fit_scaled_k(1));

/// √x·eˣ·K_ν(x) by 200-point Gauss–Legendre on the integral representation,
/// truncated where the exponential factor reaches e⁻⁴⁵.
fn scaled_k_integral(nu: u32, x: f64) -> f64 {
    let tmax = (1.0 + 45.0 / x).acosh();
    let rule = gauss_legendre::<f64>(200);
    let half = 0.5 * tmax;
    let mut acc = 0.0;
    for &(node, w) in &rule {
        let t = half * (node + 1.0);
        let f = (-x * (t.cosh() - 1.0)).exp() * if nu == 1 { t.cosh() } else { 1.0 };
        acc += w * half * f;
    }
    x.sqrt() * acc
}

fn cheb_fit_scaled_k(nu: u32) -> Vec<f64> {
    let n = CHEB_N;
    let fx: Vec<f64> = (0..n)
        .map(|j| {
            let u = (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos();
            scaled_k_integral(nu, 12.0 / (u + 1.0))
        })
        .collect();
    (0..n)
        .map(|k| {
            2.0 / n as f64
                * (0..n)
                    .map(|j| {
                        fx[j]
                            * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos()
                    })
                    .sum::<f64>()
        })
        .collect()
}

/// Clenshaw evaluation of the fitted scaled function, then unscale.
fn k_large<T: Real>(x: T, coeffs: &Lazy<Vec<f64>>) -> T {
    let u: T = lit::<T>(12.0) / x - T::one();
    let mut d1 = T::zero();
    let mut d2 = T::zero();
    for k in (1..coeffs.len()).rev() {
        let d = lit::<T>(2.0) * u * d1 - d2 + lit(coeffs[k]);
        d2 = d1;
        d1 = d;
    }
    let scaled = u * d1 - d2 + lit::<T>(coeffs[0]) * lit(0.5);
    scaled * (-x).exp() / x.sqrt()
}
