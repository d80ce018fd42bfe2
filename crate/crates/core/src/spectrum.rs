//! Wavenumber spectrum of the scalar Green kernel.
//!
//! `G(κ)` is computed as the discrete convolution of the two closed-form
//! factor spectra `F1` and `F2` under the Fourier convention
//! `F[f](κ) = (1/√(2π))∫f(x)e^{+jκx}dx`, for which the convolution theorem
//! reads `F[f1·f2] = (1/√(2π))·F1∗F2`.
//!
//! `F1` has integrable log singularities at κ = ±κ0 (branch point) and `F2`
//! at κ = 0. A plain midpoint convolution is biased O(Δκ·logΔκ) near those
//! points, so panels around the singularities are replaced by exact panel
//! moments (zeroth and first) paired with a first-order Taylor factor of the
//! smooth partner, and output bins close to the branch point fall back to
//! adaptive panel quadrature.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::green::PhysicalScene;
use crate::numerics::{bessel, integrate_split, Interval};
use crate::real::{from_usize, lit, Real};

/// Half-width of the F1 moment window (panels each side of ±κ0).
const WREF: isize = 32;
/// Half-width of the F2 moment window (panels around zero offset).
const WC: isize = 4;
/// Callers must keep |κ| at least this far from the branch point.
const BRANCH_TOL: f64 = 1e-9;

/// Uniform wavenumber grid, strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct WavenumberGrid<T> {
    samples: Vec<T>,
    spacing: T,
}

impl<T: Real> WavenumberGrid<T> {
    /// Validate an explicit sample list: uniform within 1e-12 of the spacing,
    /// strictly increasing.
    pub fn from_samples(samples: Vec<T>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Shape("grid needs at least 2 samples".into()));
        }
        let spacing = samples[1] - samples[0];
        if !(spacing > T::zero()) {
            return Err(Error::Domain("grid must be strictly increasing".into()));
        }
        for w in samples.windows(2) {
            if ((w[1] - w[0]) - spacing).abs() > lit::<T>(1e-12) * spacing.max(T::one()) {
                return Err(Error::Domain("grid spacing is not uniform".into()));
            }
        }
        Ok(Self { samples, spacing })
    }

    /// Symmetric midpoint grid: `n` samples at (i + 0.5 − n/2)·Δκ with
    /// Δκ = 2·half_span/n. No node lands on 0 or ±half_span.
    pub fn symmetric(n: usize, half_span: T) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::Shape("symmetric grid needs an even n ≥ 2".into()));
        }
        if !(half_span > T::zero()) {
            return Err(Error::Domain("half_span must be positive".into()));
        }
        let spacing = lit::<T>(2.0) * half_span / from_usize(n);
        let samples = (0..n)
            .map(|i| (from_usize::<T>(i) + lit(0.5) - from_usize::<T>(n) * lit(0.5)) * spacing)
            .collect();
        Ok(Self { samples, spacing })
    }

    /// Default grid for a scene: Δκ = κ0/256, half-span the smallest
    /// multiple of κ0 (at least 8κ0) where both factor spectra have decayed
    /// below 1e-8 of their peaks. F2 decays like e^{−d|κ|} and F1 like
    /// K0(d√(κ²−κ0²)), which fixes the two decay requirements below.
    pub fn for_scene(scene: &PhysicalScene<T>) -> Self {
        let k0 = scene.kappa0();
        let d = scene.distance;
        // e^{−19} < 1e-8 with margin for the K0 prefactor; 21/d for F2
        let f1_req = ((lit::<T>(19.0) / d) * (lit::<T>(19.0) / d) + k0 * k0).sqrt();
        let f2_req = lit::<T>(21.0) / d;
        let req = f1_req.max(f2_req) / k0;
        let k_mult = req.ceil().to_usize().unwrap_or(8).max(8);
        let n = 512 * k_mult;
        Self::symmetric(n, from_usize::<T>(k_mult) * k0).expect("valid by construction")
    }

    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn spacing(&self) -> T {
        self.spacing
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Complex transfer spectrum on a grid (e.g. G(κ)).
#[derive(Debug, Clone)]
pub struct TransferSpectrum<T> {
    pub grid: WavenumberGrid<T>,
    pub values: Vec<Complex<T>>,
}

/// Non-negative spectral density on a grid (S_J, S_N, S_N', |G|², …).
#[derive(Debug, Clone)]
pub struct SpectralDensity<T> {
    pub grid: WavenumberGrid<T>,
    pub values: Vec<T>,
}

impl<T: Real> SpectralDensity<T> {
    pub fn new(grid: WavenumberGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(Error::Domain(
                "spectral density values must be finite and non-negative".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    /// Trapezoidal ∫ values dκ.
    pub fn integral(&self) -> T {
        trapezoid(&self.values, self.grid.spacing())
    }
}

impl<T: Real> TransferSpectrum<T> {
    /// |G(κ)| as a density.
    pub fn magnitude(&self) -> SpectralDensity<T> {
        SpectralDensity {
            grid: self.grid.clone(),
            values: self.values.iter().map(|z| z.norm()).collect(),
        }
    }

    /// Trapezoidal ∫|G|²dκ.
    pub fn energy(&self) -> T {
        let sq: Vec<T> = self.values.iter().map(|z| z.norm_sqr()).collect();
        trapezoid(&sq, self.grid.spacing())
    }

    /// Peak |G| outside [−κ0, κ0] over peak |G| inside.
    pub fn side_lobe_ratio(&self, scene: &PhysicalScene<T>) -> T {
        let k0 = scene.kappa0();
        let mut inside = T::zero();
        let mut outside = T::zero();
        for (k, z) in self.grid.samples().iter().zip(&self.values) {
            let m = z.norm();
            if k.abs() <= k0 {
                inside = inside.max(m);
            } else {
                outside = outside.max(m);
            }
        }
        outside / inside
    }
}

fn trapezoid<T: Real>(v: &[T], dx: T) -> T {
    if v.len() < 2 {
        return T::zero();
    }
    let ends = (v[0] + v[v.len() - 1]) * lit(0.5);
    let inner: T = v[1..v.len() - 1].iter().copied().sum();
    (ends + inner) * dx
}

/// First factor spectrum (transform of the spherical-wave factor):
/// −jZ0/(√(2π)λ) times (π/2)(jJ0(dm) − Y0(dm)) on the propagating branch
/// |κ| < κ0 and K0(dm) on the evanescent branch, m = √|κ0²−κ²|.
///
/// The prefactor is fixed by cross-validation against the direct numerical
/// Fourier transform (see the oracle tests); it differs from a printed form
/// that does not satisfy that check.
pub fn f1_closed<T: Real>(scene: &PhysicalScene<T>, kappa: T) -> Result<Complex<T>> {
    let k0 = scene.kappa0();
    let dist = (kappa.abs() - k0).abs();
    if dist < lit(BRANCH_TOL) {
        return Err(Error::BranchPoint {
            kappa: kappa.to_f64().unwrap_or(f64::NAN),
            dist: dist.to_f64().unwrap_or(f64::NAN),
        });
    }
    f1_raw(scene, kappa)
}

fn f1_raw<T: Real>(scene: &PhysicalScene<T>, kappa: T) -> Result<Complex<T>> {
    let k0 = scene.kappa0();
    let d = scene.distance;
    let m = ((k0 - kappa.abs()) * (k0 + kappa.abs())).abs().sqrt();
    let pref = Complex::new(
        T::zero(),
        -scene.z0() / ((lit::<T>(2.0) * T::PI()).sqrt() * scene.wavelength),
    );
    let half_pi = T::FRAC_PI_2();
    if kappa.abs() < k0 {
        let j0 = bessel::bessel_j0(d * m)?;
        let y0 = bessel::bessel_y0(d * m)?;
        Ok(pref * Complex::new(-half_pi * y0, half_pi * j0))
    } else {
        let k0b = bessel::bessel_k0(d * m)?;
        Ok(pref * k0b)
    }
}

/// Second factor spectrum (transform of the near-field bracket): the
/// five-term closed form in K0/K1 and e^{−d|κ|}.
pub fn f2_closed<T: Real>(scene: &PhysicalScene<T>, kappa: T) -> Result<Complex<T>> {
    if kappa == T::zero() {
        return Err(Error::Singular("F2 has a log singularity at κ = 0".into()));
    }
    let d = scene.distance;
    let ak = kappa.abs();
    let k0v = bessel::bessel_k0(d * ak)?;
    let k1v = bessel::bessel_k1(d * ak)?;
    let c = scene.wavelength / (lit::<T>(2.0) * T::PI()); // 1/κ0
    let e = (-d * ak).exp();
    let sq_pi_half = (T::FRAC_PI_2()).sqrt();
    let sq_two_over_pi = (lit::<T>(2.0) * T::FRAC_1_PI()).sqrt();
    let t1 = d * sq_pi_half * e;
    let t2 = d * c * sq_two_over_pi * ak * k1v;
    let t3 = lit::<T>(2.0) * c * sq_two_over_pi * (k0v - d * ak * k1v);
    let t4 = -c * c / (lit::<T>(2.0) * d) * sq_pi_half * (T::one() + d * ak) * e;
    let t5 = c * c * (sq_pi_half * lit::<T>(2.0) * e / d - sq_pi_half / d * (T::one() + d * ak) * e);
    Ok(Complex::new(t1 + t4 + t5, t2 - t3))
}

/// Factor-spectrum product with the singular points zeroed (they are measure
/// zero under the panel quadrature and never land on a Gauss node).
fn conv_integrand<T: Real>(scene: &PhysicalScene<T>, kp: T, kap: T) -> Complex<T> {
    let k0 = scene.kappa0();
    let tiny = lit::<T>(1e-13) * k0.max(T::one());
    if (kp.abs() - k0).abs() < tiny || (kap - kp).abs() < tiny {
        return Complex::new(T::zero(), T::zero());
    }
    match (f1_raw(scene, kp), f2_closed(scene, kap - kp)) {
        (Ok(a), Ok(b)) => a * b,
        _ => Complex::new(T::zero(), T::zero()),
    }
}

/// G(κ) = (1/√(2π))·(F1 ∗ F2) on `grid`.
pub fn green_spectrum<T: Real>(
    scene: &PhysicalScene<T>,
    grid: &WavenumberGrid<T>,
) -> Result<TransferSpectrum<T>> {
    let n = grid.len();
    let dk = grid.spacing();
    let nodes = grid.samples();
    let k0 = scene.kappa0();

    // f1_closed rejects nodes that land on the branch point, which enforces
    // the grid-offset precondition
    let f1v: Vec<Complex<T>> = nodes
        .iter()
        .map(|&k| f1_closed(scene, k))
        .collect::<Result<_>>()?;
    // F2 on the offset lattice o·Δκ, o ∈ [−(n−1), n−1]; the o = 0 slot is
    // singular and replaced by the moment window below.
    let f2v: Vec<Complex<T>> = (-(n as isize - 1)..n as isize)
        .map(|o| {
            if o == 0 {
                Ok(Complex::new(T::zero(), T::zero()))
            } else {
                f2_closed(scene, from_isize::<T>(o) * dk)
            }
        })
        .collect::<Result<_>>()?;

    // edge-decay precondition
    let f1_peak = f1v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let f2_peak = f2v.iter().map(|z| z.norm()).fold(T::zero(), T::max);
    let f1_edge = f1v[0].norm().max(f1v[n - 1].norm());
    let f2_edge = f2v[0].norm().max(f2v[2 * n - 2].norm());
    let ratio = (f1_edge / f1_peak).max(f2_edge / f2_peak);
    if ratio > lit(1e-8) {
        return Err(Error::GridTooNarrow(ratio.to_f64().unwrap_or(f64::NAN)));
    }

    let qtol: T = lit::<T>(1e-10) * (T::one() + scene.z0() / scene.wavelength) * dk;

    // panel index nearest each branch point
    let nearest = |target: T| -> isize {
        let mut best = 0usize;
        let mut bestd = T::infinity();
        for (j, &x) in nodes.iter().enumerate() {
            let d = (x - target).abs();
            if d < bestd {
                bestd = d;
                best = j;
            }
        }
        best as isize
    };
    let je_pos = nearest(k0);
    let je_neg = nearest(-k0);

    // zeroth/first F1 panel moments over the windows around ±κ0
    let mut mu: Vec<(isize, Complex<T>, Complex<T>)> = Vec::new();
    for &je in &[je_pos, je_neg] {
        for j in (je - WREF)..(je + WREF) {
            if j < 0 || j >= n as isize {
                continue;
            }
            let center = nodes[j as usize];
            let a = center - dk * lit(0.5);
            let b = center + dk * lit(0.5);
            let splits: Vec<T> = [k0, -k0]
                .iter()
                .copied()
                .filter(|&p| p > a && p < b)
                .collect();
            let dom = Interval::new(a, b)?;
            let m0: Complex<T> = integrate_split(
                |kp| match f1_branch_guarded(scene, kp) {
                    Some(v) => v,
                    None => Complex::new(T::zero(), T::zero()),
                },
                dom,
                &splits,
                qtol,
            )?;
            let m1: Complex<T> = integrate_split(
                |kp| match f1_branch_guarded(scene, kp) {
                    Some(v) => v * (kp - center),
                    None => Complex::new(T::zero(), T::zero()),
                },
                dom,
                &splits,
                qtol,
            )?;
            mu.push((j, m0, m1));
        }
    }

    // zeroth/first F2 panel moments over the window around zero offset
    let mut nu: Vec<(isize, Complex<T>, Complex<T>)> = Vec::new();
    for o in -WC..=WC {
        let center = from_isize::<T>(o) * dk;
        let a = center - dk * lit(0.5);
        let b = center + dk * lit(0.5);
        let splits: Vec<T> = if a < T::zero() && b > T::zero() {
            vec![T::zero()]
        } else {
            vec![]
        };
        let dom = Interval::new(a, b)?;
        let f2g = |u: T| {
            if u == T::zero() {
                Complex::new(T::zero(), T::zero())
            } else {
                f2_closed(scene, u).unwrap_or(Complex::new(T::zero(), T::zero()))
            }
        };
        let n0: Complex<T> = integrate_split(f2g, dom, &splits, qtol)?;
        let n1: Complex<T> = integrate_split(|u| f2g(u) * (u - center), dom, &splits, qtol)?;
        nu.push((o, n0, n1));
    }

    let near_limit = (WREF + WC + 2) as isize;
    // g even ⇒ G(−κ) = G(κ) exactly; on a symmetric grid compute the κ > 0
    // half and mirror, which enforces the evenness invariant to the bit
    let mirror_symmetric = (0..n / 2).all(|i| {
        (nodes[i] + nodes[n - 1 - i]).abs() <= lit::<T>(1e-12) * dk
    });
    let work: Vec<usize> = if mirror_symmetric {
        (n / 2..n).collect()
    } else {
        (0..n).collect()
    };
    let computed: Vec<Complex<T>> = work
        .par_iter()
        .map(|&i| -> Result<Complex<T>> {
            let kap = nodes[i];
            let ii = i as isize;
            // base midpoint lattice sum
            let mut s = Complex::new(T::zero(), T::zero());
            for j in 0..n {
                s += f1v[j] * f2v[(ii - j as isize + n as isize - 1) as usize];
            }
            s = s * dk;

            let near_branch =
                (ii - je_pos).abs() <= near_limit || (ii - je_neg).abs() <= near_limit;
            if near_branch {
                // replace all window panels by adaptive quadrature of the
                // full product
                let mut win: Vec<isize> = Vec::new();
                for &je in &[je_pos, je_neg] {
                    win.extend((je - WREF)..(je + WREF));
                }
                win.extend((ii - WC)..=(ii + WC));
                win.sort_unstable();
                win.dedup();
                for j in win {
                    if j < 0 || j >= n as isize {
                        continue;
                    }
                    let center = nodes[j as usize];
                    let a = center - dk * lit(0.5);
                    let b = center + dk * lit(0.5);
                    let splits: Vec<T> = [k0, -k0, kap]
                        .iter()
                        .copied()
                        .filter(|&p| p > a && p < b)
                        .collect();
                    let dom = Interval::new(a, b)?;
                    let exact: Complex<T> =
                        integrate_split(|kp| conv_integrand(scene, kp, kap), dom, &splits, qtol)?;
                    s += exact
                        - f1v[j as usize]
                            * f2v[(ii - j + n as isize - 1) as usize]
                            * dk;
                }
            } else {
                // F2 singular window: exact F2 moments × F1 Taylor factor
                for &(o, n0, n1) in &nu {
                    let j = ii - o;
                    if j < 1 || j >= n as isize - 1 {
                        continue;
                    }
                    let f1p = (f1v[(j + 1) as usize] - f1v[(j - 1) as usize])
                        / (lit::<T>(2.0) * dk);
                    s += f1v[j as usize] * n0 - f1p * n1
                        - f1v[j as usize] * f2v[(o + n as isize - 1) as usize] * dk;
                }
                // F1 singular windows: exact F1 moments × F2 Taylor factor
                for &(j, m0, m1) in &mu {
                    let o = ii - j;
                    let oi = o + n as isize - 1;
                    if oi < 1 || oi >= 2 * (n as isize) - 2 {
                        continue;
                    }
                    let f2p = (f2v[(oi + 1) as usize] - f2v[(oi - 1) as usize])
                        / (lit::<T>(2.0) * dk);
                    s += m0 * f2v[oi as usize] - m1 * f2p
                        - f1v[j as usize] * f2v[oi as usize] * dk;
                }
            }
            Ok(s / (lit::<T>(2.0) * T::PI()).sqrt())
        })
        .collect::<Result<_>>()?;

    let values: Vec<Complex<T>> = if mirror_symmetric {
        (0..n)
            .map(|i| {
                if i < n / 2 {
                    computed[n - 1 - i - n / 2]
                } else {
                    computed[i - n / 2]
                }
            })
            .collect()
    } else {
        computed
    };

    Ok(TransferSpectrum {
        grid: grid.clone(),
        values,
    })
}

/// F1 with only the exactly-singular point masked (quadrature helper).
fn f1_branch_guarded<T: Real>(scene: &PhysicalScene<T>, kp: T) -> Option<Complex<T>> {
    let k0 = scene.kappa0();
    if (kp.abs() - k0).abs() < lit::<T>(1e-13) * k0.max(T::one()) {
        return None;
    }
    f1_raw(scene, kp).ok()
}

fn from_isize<T: Real>(v: isize) -> T {
    T::from_isize(v).expect("index representable")
}

/// Brute-force windowed Fourier transform (1/√(2π))∫f(x)e^{jκx}dx over
/// [−half_width, half_width] with a raised-cosine taper of width `taper`.
/// Returns (value, error estimate from panel-count doubling).
pub fn numerical_ft_oracle<T, F>(
    f: F,
    kappa: T,
    half_width: T,
    taper: T,
) -> Result<(Complex<T>, T)>
where
    T: Real,
    F: Fn(T) -> Complex<T> + Sync,
{
    if !(half_width > T::zero()) || taper < T::zero() || taper > half_width {
        return Err(Error::Domain(
            "need 0 < half_width and 0 ≤ taper ≤ half_width".into(),
        ));
    }
    let w = half_width;
    let taper_fn = |x: T| -> T {
        let ax = x.abs();
        if ax <= w - taper {
            T::one()
        } else if ax >= w {
            T::zero()
        } else {
            lit::<T>(0.5) * (T::one() + (T::PI() * (ax - (w - taper)) / taper).cos())
        }
    };
    let rule = crate::numerics::gauss_legendre::<T>(15);
    let eval = |n_panels: usize| -> Complex<T> {
        let width = lit::<T>(2.0) * w / from_usize(n_panels);
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..n_panels {
            let a = -w + width * from_usize(i);
            let half = width * lit(0.5);
            let mid = a + half;
            for &(x, wt) in &rule {
                let xx = mid + half * x;
                let val = f(xx) * Complex::new(T::zero(), kappa * xx).exp() * taper_fn(xx);
                acc += val * (wt * half);
            }
        }
        acc / (lit::<T>(2.0) * T::PI()).sqrt()
    };

    // ~1 panel per oscillation of e^{jκx}, rounded to a multiple of 8 so
    // doubling keeps panel edges nested with simple fractions of the window
    let base = (lit::<T>(2.0) * w * (kappa.abs() + T::one()) / T::PI())
        .ceil()
        .to_usize()
        .unwrap_or(64)
        + 16;
    let mut n_panels = base.div_ceil(8) * 8;
    let mut prev = eval(n_panels);
    for _ in 0..8 {
        n_panels *= 2;
        let cur = eval(n_panels);
        let est = (cur - prev).norm();
        if est <= lit::<T>(1e-7) * cur.norm().max(T::one()) {
            return Ok((cur, est));
        }
        prev = cur;
    }
    Err(Error::Accuracy {
        best_err: f64::NAN,
        requested: 1e-7,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::green::PhysicalScene;
    use num_complex::Complex;

    fn scene(lambda: f64, d: f64) -> PhysicalScene<f64> {
        PhysicalScene::new(lambda, d).unwrap()
    }

    #[test]
    fn grid_constructors() {
        let g = WavenumberGrid::symmetric(8, 2.0f64).unwrap();
        assert_eq!(g.len(), 8);
        assert!((g.spacing() - 0.5).abs() < 1e-15);
        assert!((g.samples()[0] + 1.75).abs() < 1e-15);
        assert!((g.samples()[7] - 1.75).abs() < 1e-15);
        assert!(WavenumberGrid::from_samples(vec![0.0, 1.0, 2.5]).is_err());
        assert!(WavenumberGrid::from_samples(vec![0.0, 1.0, 2.0]).is_ok());
        assert!(WavenumberGrid::symmetric(7, 1.0).is_err());
    }

    #[test]
    fn default_grid_matches_scene_scaling() {
        let s = scene(5.0, 5.0);
        let g = WavenumberGrid::for_scene(&s);
        // wide-separation scene needs only the floor span of 8κ0
        assert_eq!(g.len(), 4096);
        let s = scene(5.0, 1.0);
        let g = WavenumberGrid::for_scene(&s);
        assert!(g.len() > 4096);
        assert!((g.spacing() - s.kappa0() / 256.0).abs() < 1e-12);
    }

    #[test]
    fn f1_even_and_branch_guard() {
        let s = scene(5.0, 1.0);
        for &k in &[0.3, 0.9, 2.0, 7.7] {
            let a = f1_closed(&s, k).unwrap();
            let b = f1_closed(&s, -k).unwrap();
            assert!((a - b).norm() < 1e-14 * a.norm());
        }
        assert!(matches!(
            f1_closed(&s, s.kappa0() + 1e-10),
            Err(Error::BranchPoint { .. })
        ));
    }

    #[test]
    fn f1_decays_in_evanescent_tail() {
        let s = scene(5.0, 1.0);
        let a = f1_closed(&s, 5.0).unwrap().norm();
        let b = f1_closed(&s, 10.0).unwrap().norm();
        let c = f1_closed(&s, 20.0).unwrap().norm();
        assert!(a > b && b > c && c < 1e-7);
    }

    #[test]
    fn f2_even_and_singular_at_zero() {
        let s = scene(5.0, 1.0);
        for &k in &[0.2, 1.0, 3.3] {
            let a = f2_closed(&s, k).unwrap();
            let b = f2_closed(&s, -k).unwrap();
            assert!((a - b).norm() < 1e-14 * a.norm());
        }
        assert!(f2_closed(&s, 0.0).is_err());
        // exponential decay at rate d
        let r = f2_closed(&s, 20.0).unwrap().norm() / f2_closed(&s, 10.0).unwrap().norm();
        assert!(r < (-9.0f64).exp());
    }

    #[test]
    fn oracle_gaussian_self_transform() {
        let (v, _) = numerical_ft_oracle(
            |x: f64| Complex::new((-x * x / 2.0).exp(), 0.0),
            0.7,
            40.0,
            10.0,
        )
        .unwrap();
        let expect = (-0.7f64 * 0.7 / 2.0).exp();
        assert!((v - Complex::new(expect, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn oracle_indicator() {
        let (v, _) = numerical_ft_oracle(
            |x: f64| {
                if x.abs() <= 1.0 {
                    Complex::new(1.0, 0.0)
                } else {
                    Complex::new(0.0, 0.0)
                }
            },
            0.0,
            2.0,
            0.5,
        )
        .unwrap();
        let expect = 2.0 / (2.0 * std::f64::consts::PI).sqrt();
        assert!((v.re - expect).abs() < 1e-9 && v.im.abs() < 1e-12);
    }

    #[test]
    fn f1_matches_numerical_ft() {
        // transform of the spherical-wave factor f1(x) = −jZ0 e^{jκ0ρ}/(2λρ)
        let s = scene(5.0, 1.0);
        let k0 = s.kappa0();
        let z0 = s.z0();
        let f = |x: f64| {
            let rho = (x * x + 1.0).sqrt();
            Complex::new(0.0, -z0 / (2.0 * 5.0 * rho)) * Complex::new(0.0, k0 * rho).exp()
        };
        let (num, _) = numerical_ft_oracle(f, 0.0, 3000.0, 800.0).unwrap();
        let closed = f1_closed(&s, 0.0).unwrap();
        assert!(
            (num - closed).norm() < 1e-4 * closed.norm(),
            "closed {closed} vs numeric {num}"
        );
    }

    #[test]
    fn f2_matches_numerical_ft() {
        let s = scene(5.0, 1.0);
        let k0 = s.kappa0();
        let f = |x: f64| {
            let r2 = x * x + 1.0;
            let r = r2.sqrt();
            let aniso = (1.0 - 2.0 * x * x) / r2;
            Complex::new(1.0 / r2 - aniso / (k0 * k0 * r2), aniso / (k0 * r))
        };
        let (num, _) = numerical_ft_oracle(f, 1.0, 800.0, 200.0).unwrap();
        let closed = f2_closed(&s, 1.0).unwrap();
        assert!(
            (num - closed).norm() < 1e-4 * closed.norm(),
            "closed {closed} vs numeric {num}"
        );
    }

    #[test]
    fn narrow_grid_rejected() {
        let s = scene(5.0, 1.0);
        let g = WavenumberGrid::symmetric(512, 2.0 * s.kappa0()).unwrap();
        assert!(matches!(
            green_spectrum(&s, &g),
            Err(Error::GridTooNarrow(_))
        ));
    }

    #[test]
    fn spectrum_magnitude_even_and_lobed() {
        let s = scene(5.0, 1.0);
        let g = WavenumberGrid::for_scene(&s);
        let spec = green_spectrum(&s, &g).unwrap();
        let n = g.len();
        // |G| even
        for i in 0..n / 2 {
            let a = spec.values[i].norm();
            let b = spec.values[n - 1 - i].norm();
            assert!((a - b).abs() <= 1e-10 * a.max(1e-30), "asymmetry at {i}");
        }
        // main lobe peaks inside [−κ0, κ0] and side lobes exist at d=1
        let k0 = s.kappa0();
        let peak_idx = (0..n)
            .max_by(|&a, &b| {
                spec.values[a]
                    .norm()
                    .partial_cmp(&spec.values[b].norm())
                    .unwrap()
            })
            .unwrap();
        assert!(g.samples()[peak_idx].abs() < k0);
        let ratio = spec.side_lobe_ratio(&s);
        assert!(ratio > 0.05, "expected visible side lobes, got {ratio}");
    }

    #[test]
    fn short_wavelength_suppresses_side_lobes() {
        let s = scene(0.5, 1.0);
        let g = WavenumberGrid::for_scene(&s);
        let spec = green_spectrum(&s, &g).unwrap();
        assert!(spec.side_lobe_ratio(&s) < 0.05);
    }

    #[test]
    fn energy_grows_as_distance_shrinks() {
        let energies: Vec<f64> = [0.5, 1.0, 5.0]
            .iter()
            .map(|&d| {
                let s = scene(5.0, d);
                let g = WavenumberGrid::for_scene(&s);
                green_spectrum(&s, &g).unwrap().energy()
            })
            .collect();
        assert!(energies[0] > energies[1] && energies[1] > energies[2]);
    }
}
