//! Green kernels: the scalar kernel between parallel lines and the far-field
//! dyadic free-space Green function.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Geometry and medium constants for a parallel-line link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalScene<T> {
    /// wavelength λ, meters
    pub wavelength: T,
    /// line separation d, meters
    pub distance: T,
}

impl<T: Real> PhysicalScene<T> {
    pub fn new(wavelength: T, distance: T) -> Result<Self> {
        if !(wavelength > T::zero()) || !wavelength.is_finite() {
            return Err(Error::Domain(format!(
                "wavelength must be positive, got {wavelength}"
            )));
        }
        if !(distance > T::zero()) || !distance.is_finite() {
            return Err(Error::Domain(format!(
                "distance must be positive, got {distance}"
            )));
        }
        Ok(Self {
            wavelength,
            distance,
        })
    }

    /// Free-space wavenumber κ0 = 2π/λ, rad/m.
    pub fn kappa0(&self) -> T {
        lit::<T>(2.0) * T::PI() / self.wavelength
    }

    /// Free-space impedance Z0 = 120π, ohms.
    pub fn z0(&self) -> T {
        lit::<T>(120.0) * T::PI()
    }
}

/// Dyadic Green sample: far-field 3×3 matrix and the separation it was
/// evaluated at.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicGreenSample<T> {
    /// row-major 3×3
    pub matrix: [Complex<T>; 9],
    pub separation: [T; 3],
}

/// Scalar kernel g(x) between parallel lines, x = r − s.
///
/// g(x) = −jZ0·e^{jκ0ρ}/(2λρ) · [d²/ρ² + (j/(κ0ρ) − 1/(κ0ρ)²)·(d²−2x²)/ρ²]
/// with ρ = √(x²+d²). Even in x; carries the 1/ρ² and 1/ρ³ near-field terms.
pub fn scalar_kernel<T: Real>(scene: &PhysicalScene<T>, x: T) -> Complex<T> {
    let d = scene.distance;
    let k0 = scene.kappa0();
    let rho2 = x * x + d * d;
    let rho = rho2.sqrt();
    let kr = k0 * rho;
    let aniso = (d * d - lit::<T>(2.0) * x * x) / rho2;
    let bracket = Complex::new(
        d * d / rho2 - aniso / (kr * kr),
        aniso / kr,
    );
    let phase = Complex::new(T::zero(), kr).exp();
    let pref = Complex::new(T::zero(), -scene.z0() / (lit::<T>(2.0) * scene.wavelength * rho));
    pref * phase * bracket
}

/// Far-field dyadic Green function at separation `p`:
/// −(jκ0Z0/4π)·(e^{jκ0‖p‖}/‖p‖)·(I − p̂p̂ᵀ).
pub fn dyadic_green<T: Real>(scene: &PhysicalScene<T>, p: [T; 3]) -> Result<DyadicGreenSample<T>> {
    let norm2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    if norm2 == T::zero() {
        return Err(Error::Singular(
            "dyadic Green function undefined at zero separation".into(),
        ));
    }
    let norm = norm2.sqrt();
    let k0 = scene.kappa0();
    let phat = [p[0] / norm, p[1] / norm, p[2] / norm];
    let scale = Complex::new(T::zero(), -k0 * scene.z0() / (lit::<T>(4.0) * T::PI()))
        * Complex::new(T::zero(), k0 * norm).exp()
        / norm;
    let mut matrix = [Complex::new(T::zero(), T::zero()); 9];
    for i in 0..3 {
        for j in 0..3 {
            let proj = if i == j { T::one() } else { T::zero() } - phat[i] * phat[j];
            matrix[i * 3 + j] = scale * proj;
        }
    }
    Ok(DyadicGreenSample {
        matrix,
        separation: p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn scene(lambda: f64, d: f64) -> PhysicalScene<f64> {
        PhysicalScene::new(lambda, d).unwrap()
    }

    #[test]
    fn scene_validation() {
        assert!(PhysicalScene::new(0.0, 1.0).is_err());
        assert!(PhysicalScene::new(1.0, -1.0).is_err());
        let s = scene(5.0, 1.0);
        assert!((s.kappa0() * s.wavelength - 2.0 * std::f64::consts::PI).abs() < 1e-15);
        assert!((s.z0() - 120.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn kernel_at_zero_offset() {
        // x=0: −(jZ0/(2λd))·e^{jκ0d}·[1 + j/(κ0d) − 1/(κ0d)²]
        let s = scene(5.0, 1.0);
        let k0 = s.kappa0();
        let z0 = s.z0();
        let expect = Complex::new(0.0, -z0 / (2.0 * 5.0 * 1.0))
            * Complex::new(0.0, k0).exp()
            * Complex::new(1.0 - 1.0 / (k0 * k0), 1.0 / k0);
        let got = scalar_kernel(&s, 0.0);
        assert!((got - expect).norm() < 1e-12 * expect.norm());
    }

    #[test]
    fn kernel_even_in_x() {
        let s = scene(5.0, 1.0);
        for &x in &[0.3, 1.7, 9.2] {
            let a = scalar_kernel(&s, x);
            let b = scalar_kernel(&s, -x);
            assert!((a - b).norm() < 1e-14 * a.norm());
        }
    }

    #[test]
    fn dyadic_cross_check_with_scalar_leading_term() {
        // xx-element of the dyadic form at p = (x, d, 0) equals the scalar
        // kernel's leading bracket term: κ0Z0/(4π) = Z0/(2λ) and
        // 1 − p̂x² = d²/ρ².
        let s = scene(5.0, 1.0);
        let x = 2.0;
        let dg = dyadic_green(&s, [x, s.distance, 0.0]).unwrap();
        let rho2 = x * x + s.distance * s.distance;
        let rho = rho2.sqrt();
        let leading = Complex::new(0.0, -s.z0() / (2.0 * s.wavelength * rho))
            * Complex::new(0.0, s.kappa0() * rho).exp()
            * (s.distance * s.distance / rho2);
        assert!((dg.matrix[0] - leading).norm() < 1e-12 * leading.norm());
        // and the full scalar kernel differs only by the near-field terms
        let g = scalar_kernel(&s, x);
        let kr = s.kappa0() * rho;
        let aniso = (s.distance * s.distance - 2.0 * x * x) / rho2;
        let near = Complex::new(0.0, -s.z0() / (2.0 * s.wavelength * rho))
            * Complex::new(0.0, kr).exp()
            * Complex::new(-aniso / (kr * kr), aniso / kr);
        assert!((g - (leading + near)).norm() < 1e-12 * g.norm());
    }

    #[test]
    fn dyadic_along_z_is_transverse() {
        let s = scene(5.0, 1.0);
        let dg = dyadic_green(&s, [0.0, 0.0, 3.0]).unwrap();
        // proportional to diag(1,1,0)
        assert!(dg.matrix[8].norm() < 1e-14);
        assert!((dg.matrix[0] - dg.matrix[4]).norm() < 1e-14);
        assert!(dg.matrix[1].norm() < 1e-14);
    }

    #[test]
    fn dyadic_inverse_distance_scaling() {
        let s = scene(5.0, 1.0);
        let p = [1.0, 2.0, -0.5];
        let g1 = dyadic_green(&s, p).unwrap();
        let g2 = dyadic_green(&s, [2.0 * p[0], 2.0 * p[1], 2.0 * p[2]]).unwrap();
        let n1: f64 = g1.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n2: f64 = g2.matrix.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((n2 / n1 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dyadic_projector_idempotent() {
        let s = scene(5.0, 1.0);
        let p = [0.7f64, -1.1, 2.3];
        let norm = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        let phat = [p[0] / norm, p[1] / norm, p[2] / norm];
        let mut proj = [[0.0f64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                proj[i][j] = if i == j { 1.0 } else { 0.0 } - phat[i] * phat[j];
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let mut pp = 0.0;
                for k in 0..3 {
                    pp += proj[i][k] * proj[k][j];
                }
                assert!((pp - proj[i][j]).abs() < 1e-12);
            }
            let dot: f64 = (0..3).map(|k| proj[i][k] * phat[k]).sum();
            assert!(dot.abs() < 1e-12);
        }
        assert!(dyadic_green(&s, [0.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn far_field_magnitude_decreasing() {
        let s = scene(5.0, 1.0);
        let mut prev = f64::INFINITY;
        // logarithmic grid from 10d outward
        for i in 0..40 {
            let x = 10.0 * s.distance * 10f64.powf(i as f64 * 0.05);
            let m = scalar_kernel(&s, x).norm();
            assert!(m < prev, "|g| not decreasing at x={x}");
            prev = m;
        }
    }

    #[test]
    fn phase_tracks_propagation_distance() {
        // arg(g) − κ0ρ has no jumps bigger than π on a fine grid
        let s = scene(5.0, 1.0);
        let k0 = s.kappa0();
        let mut prev: Option<f64> = None;
        for i in 0..2000 {
            let x = i as f64 * 0.01;
            let rho = (x * x + s.distance * s.distance).sqrt();
            let residual = scalar_kernel(&s, x).arg() - (k0 * rho).rem_euclid(2.0 * std::f64::consts::PI);
            if let Some(p) = prev {
                let mut diff = (residual - p).abs();
                if diff > std::f64::consts::PI {
                    diff = (2.0 * std::f64::consts::PI - diff).abs();
                }
                assert!(diff < std::f64::consts::PI, "phase jump at x={x}");
            }
            prev = Some(residual);
        }
    }
}
