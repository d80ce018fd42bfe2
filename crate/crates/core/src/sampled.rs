//! Sampled-field mutual information between continuous regions: receive
//! covariances through the Green kernel, log-det mutual information, and
//! volume-normalized convergence sweeps.

use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::green::{dyadic_green, scalar_kernel, PhysicalScene};
use crate::numerics::{eigh, HermitianMatrix, Interval};
use crate::real::{from_usize, lit, Real};

/// Sample coordinates: a 1-D line layout or full 3-D points.
#[derive(Clone)]
pub enum LayoutPoints<T> {
    Line(Vec<T>),
    Space(Vec<[T; 3]>),
}

impl<T> LayoutPoints<T> {
    pub fn len(&self) -> usize {
        match self {
            LayoutPoints::Line(v) => v.len(),
            LayoutPoints::Space(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Source/destination sample points with quadrature weights.
#[derive(Clone)]
pub struct SamplingLayout<T> {
    pub source: LayoutPoints<T>,
    pub source_weights: Vec<T>,
    pub dest: LayoutPoints<T>,
    pub dest_weights: Vec<T>,
}

impl<T: Real> SamplingLayout<T> {
    pub fn validate(&self) -> Result<()> {
        if self.source.is_empty() || self.dest.is_empty() {
            return Err(Error::Shape("layouts need at least one point".into()));
        }
        if self.source.len() != self.source_weights.len()
            || self.dest.len() != self.dest_weights.len()
        {
            return Err(Error::Shape("weight count must match point count".into()));
        }
        if self
            .source_weights
            .iter()
            .chain(&self.dest_weights)
            .any(|w| !(*w > T::zero()))
        {
            return Err(Error::Domain("quadrature weights must be positive".into()));
        }
        Ok(())
    }

    /// 1-D layout with `n_source`/`n_dest` midpoint samples on the given
    /// intervals; weights are the cell widths.
    pub fn line(
        source: Interval<T>,
        n_source: usize,
        dest: Interval<T>,
        n_dest: usize,
    ) -> Result<Self> {
        let build = |iv: Interval<T>, n: usize| -> Result<(Vec<T>, Vec<T>)> {
            if n == 0 {
                return Err(Error::Shape("need at least one sample".into()));
            }
            let w = iv.width() / from_usize(n);
            let pts = (0..n)
                .map(|i| iv.lo() + w * (from_usize::<T>(i) + lit(0.5)))
                .collect();
            Ok((pts, vec![w; n]))
        };
        let (sp, sw) = build(source, n_source)?;
        let (dp, dw) = build(dest, n_dest)?;
        Ok(Self {
            source: LayoutPoints::Line(sp),
            source_weights: sw,
            dest: LayoutPoints::Line(dp),
            dest_weights: dw,
        })
    }
}

/// Source autocorrelation R_J: either a stationary profile R(Δs) or a general
/// two-point kernel R(s, s'), with its support interval.
#[derive(Clone)]
pub enum SourceAutocorrelation<T> {
    Stationary {
        r: Arc<dyn Fn(T) -> T + Send + Sync>,
        support: Interval<T>,
    },
    General {
        r: Arc<dyn Fn(T, T) -> T + Send + Sync>,
        support: Interval<T>,
    },
}

impl<T: Real> SourceAutocorrelation<T> {
    pub fn eval(&self, s: T, sp: T) -> T {
        match self {
            SourceAutocorrelation::Stationary { r, .. } => r(sp - s),
            SourceAutocorrelation::General { r, .. } => r(s, sp),
        }
    }

    pub fn support(&self) -> Interval<T> {
        match self {
            SourceAutocorrelation::Stationary { support, .. } => *support,
            SourceAutocorrelation::General { support, .. } => *support,
        }
    }
}

/// Receive covariance K_E[i][j] = Σ_{a,b} w_a w_b g(r_i,s_a) R(s_a,s_b)
/// conj(g(r_j,s_b)), assembled as (G·R)·G^H. 1-D layouts use the scalar
/// kernel; 3-D layouts build 3×3 dyadic blocks (3n-dim result).
pub fn receive_covariance<T: Real>(
    scene: &PhysicalScene<T>,
    layout: &SamplingLayout<T>,
    r_j: &SourceAutocorrelation<T>,
) -> Result<HermitianMatrix<T>> {
    layout.validate()?;
    match (&layout.source, &layout.dest) {
        (LayoutPoints::Line(src), LayoutPoints::Line(dst)) => {
            let m = src.len();
            let n = dst.len();
            // weighted transfer matrix B[i][a] = g(r_i − s_a)·w_a
            let b: Vec<Complex<T>> = (0..n * m)
                .map(|idx| {
                    let (i, a) = (idx / m, idx % m);
                    scalar_kernel(scene, dst[i] - src[a]) * layout.source_weights[a]
                })
                .collect();
            let r: Vec<T> = (0..m * m)
                .map(|idx| r_j.eval(src[idx / m], src[idx % m]))
                .collect();
            // M = B·R, then K = M·B^H
            let mut mbuf = vec![Complex::new(T::zero(), T::zero()); n * m];
            for i in 0..n {
                for bcol in 0..m {
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for a in 0..m {
                        acc += b[i * m + a] * r[a * m + bcol];
                    }
                    mbuf[i * m + bcol] = acc;
                }
            }
            let k = HermitianMatrix::from_fn(n, |i, j| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for a in 0..m {
                    acc += mbuf[i * m + a] * b[j * m + a].conj();
                }
                acc
            });
            Ok(clip_psd(k))
        }
        (LayoutPoints::Space(src), LayoutPoints::Space(dst)) => {
            let m = src.len();
            let n = dst.len();
            // dyadic blocks B[i][a]: 3×3
            let mut blocks = Vec::with_capacity(n * m);
            for (i, rp) in dst.iter().enumerate() {
                for (a, sp) in src.iter().enumerate() {
                    let p = [rp[0] - sp[0], rp[1] - sp[1], rp[2] - sp[2]];
                    let g = dyadic_green(scene, p)?;
                    let w = layout.source_weights[a];
                    let mut blk = g.matrix;
                    for e in blk.iter_mut() {
                        *e = *e * w;
                    }
                    blocks.push(blk);
                    let _ = i;
                }
            }
            let src_flat: Vec<T> = src.iter().map(|p| p[0]).collect();
            let k = HermitianMatrix::from_fn(3 * n, |row, col| {
                let (i, u) = (row / 3, row % 3);
                let (j, v) = (col / 3, col % 3);
                let mut acc = Complex::new(T::zero(), T::zero());
                for a in 0..m {
                    for bq in 0..m {
                        let rab = r_j.eval(src_flat[a], src_flat[bq]);
                        if rab == T::zero() {
                            continue;
                        }
                        // x-polarized source current: only the x column couples
                        acc += blocks[i * m + a][u * 3] * rab * blocks[j * m + bq][v * 3].conj();
                    }
                }
                acc
            });
            Ok(clip_psd(k))
        }
        _ => Err(Error::Shape(
            "source and destination layouts must have the same dimensionality".into(),
        )),
    }
}

/// Clamp eigenvalues below −1e-12·λ_max to zero (quadrature round-off).
fn clip_psd<T: Real>(k: HermitianMatrix<T>) -> HermitianMatrix<T> {
    let dec = match eigh(&k) {
        Ok(d) => d,
        Err(_) => return k,
    };
    let lmax = dec.eigenvalues[0].max(T::zero());
    if dec.eigenvalues.iter().all(|&l| l >= -lit::<T>(1e-12) * lmax) && dec.eigenvalues[dec.dim - 1] >= T::zero()
    {
        return k;
    }
    let dim = dec.dim;
    HermitianMatrix::from_fn(dim, |i, j| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for t in 0..dim {
            let l = dec.eigenvalues[t].max(T::zero());
            acc += dec.eigenvectors[i * dim + t] * l * dec.eigenvectors[j * dim + t].conj();
        }
        acc
    })
}

/// Relative change of ‖K_E‖ when the source sampling is doubled; large values
/// flag quadrature under-resolution.
pub fn source_resolution_check<T: Real>(
    scene: &PhysicalScene<T>,
    layout: &SamplingLayout<T>,
    r_j: &SourceAutocorrelation<T>,
) -> Result<T> {
    let k1 = receive_covariance(scene, layout, r_j)?;
    let refined = match &layout.source {
        LayoutPoints::Line(src) => {
            let m = src.len();
            let mut pts = Vec::with_capacity(2 * m);
            let mut wts = Vec::with_capacity(2 * m);
            for (p, w) in src.iter().zip(&layout.source_weights) {
                let q = *w * lit(0.25);
                pts.push(*p - q);
                pts.push(*p + q);
                wts.push(*w * lit(0.5));
                wts.push(*w * lit(0.5));
            }
            SamplingLayout {
                source: LayoutPoints::Line(pts),
                source_weights: wts,
                dest: layout.dest.clone(),
                dest_weights: layout.dest_weights.clone(),
            }
        }
        LayoutPoints::Space(_) => {
            return Err(Error::Shape(
                "resolution check implemented for line layouts".into(),
            ))
        }
    };
    let k2 = receive_covariance(scene, &refined, r_j)?;
    let base = k1.max_abs();
    let diff = k1.add(&k2.scaled(-T::one()))?.max_abs();
    Ok(diff / base.max(lit(1e-300)))
}

/// I = log det(K_E + K_N) − log det(K_N), via whitening: eigendecompose K_N,
/// whiten K_E, sum log(1 + μ_i). Never forms a raw determinant.
pub fn mutual_information<T: Real>(
    k_e: &HermitianMatrix<T>,
    k_n: &HermitianMatrix<T>,
) -> Result<T> {
    if k_e.dim() != k_n.dim() {
        return Err(Error::Shape(format!(
            "dim mismatch {} vs {}",
            k_e.dim(),
            k_n.dim()
        )));
    }
    let noise = eigh(k_n)?;
    let dim = noise.dim;
    let lmin = noise.eigenvalues[dim - 1];
    let lmax = noise.eigenvalues[0];
    if !(lmin > T::zero()) {
        return Err(Error::NotPositiveDefinite(format!(
            "noise eigenvalue {lmin}"
        )));
    }
    let cond = lmax / lmin;
    if cond > lit(1e12) {
        return Err(Error::IllConditioned(cond.to_f64().unwrap_or(f64::NAN)));
    }
    // W = Λ^{-1/2} Q^H; M = W K_E W^H
    let mut w = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for r in 0..dim {
        let scale = T::one() / noise.eigenvalues[r].sqrt();
        for c in 0..dim {
            w[r * dim + c] = noise.eigenvectors[c * dim + r].conj() * scale;
        }
    }
    // tmp = W·K_E
    let mut tmp = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for r in 0..dim {
        for c in 0..dim {
            let mut acc = Complex::new(T::zero(), T::zero());
            for t in 0..dim {
                acc += w[r * dim + t] * k_e.get(t, c);
            }
            tmp[r * dim + c] = acc;
        }
    }
    let m = HermitianMatrix::from_fn(dim, |i, j| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for t in 0..dim {
            acc += tmp[i * dim + t] * w[j * dim + t].conj();
        }
        acc
    });
    let dec = eigh(&m)?;
    let mut mi = T::zero();
    for &mu in &dec.eigenvalues {
        mi += (T::one() + mu.max(T::zero())).ln();
    }
    Ok(mi)
}

/// MI per meter for increasing destination sampling densities; the sequence
/// approximates the volume-normalized limit. Noise is the sampled white
/// model K_N = (σ²/w)·I.
pub fn normalized_capacity_sweep<T: Real>(
    scene: &PhysicalScene<T>,
    region_length: T,
    densities: &[usize],
    r_j: &SourceAutocorrelation<T>,
    sigma2: T,
) -> Result<Vec<(usize, T, T)>> {
    if densities.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("densities must be increasing".into()));
    }
    let support = r_j.support();
    let mut out = Vec::with_capacity(densities.len());
    for &per_meter in densities {
        let n = ((region_length * from_usize::<T>(per_meter))
            .ceil()
            .to_usize()
            .unwrap_or(1))
        .max(1);
        let dest = Interval::new(T::zero(), region_length)?;
        // source resolved twice as finely as the destination
        let n_src = (2 * n).max(32);
        let layout = SamplingLayout::line(support, n_src, dest, n)?;
        let w = region_length / from_usize(n);
        let k_e = receive_covariance(scene, &layout, r_j)?;
        let k_n = HermitianMatrix::from_diagonal(&vec![sigma2 / w; n]);
        let mi = mutual_information(&k_e, &k_n)?;
        out.push((n, mi, mi / region_length));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn scene() -> PhysicalScene<f64> {
        PhysicalScene::new(5.0, 1.0).unwrap()
    }

    fn stationary(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lo: f64,
        hi: f64,
    ) -> SourceAutocorrelation<f64> {
        SourceAutocorrelation::Stationary {
            r: Arc::new(f),
            support: Interval::new(lo, hi).unwrap(),
        }
    }

    #[test]
    fn zero_source_gives_zero_matrix() {
        let s = scene();
        let layout = SamplingLayout::line(
            Interval::new(0.0, 1.0).unwrap(),
            8,
            Interval::new(0.0, 1.0).unwrap(),
            4,
        )
        .unwrap();
        let rj = stationary(|_| 0.0, 0.0, 1.0);
        let k = receive_covariance(&s, &layout, &rj).unwrap();
        assert!(k.max_abs() == 0.0);
    }

    #[test]
    fn single_point_degenerate() {
        let s = scene();
        let p = 2.5;
        let layout = SamplingLayout {
            source: LayoutPoints::Line(vec![0.3]),
            source_weights: vec![0.2],
            dest: LayoutPoints::Line(vec![1.1]),
            dest_weights: vec![0.4],
        };
        let rj = stationary(move |_| p, 0.0, 1.0);
        let k = receive_covariance(&s, &layout, &rj).unwrap();
        let g = scalar_kernel(&s, 1.1 - 0.3);
        let expect = p * g.norm_sqr() * 0.2 * 0.2;
        assert!((k.get(0, 0).re - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn matches_triple_loop_oracle() {
        let s = scene();
        let layout = SamplingLayout::line(
            Interval::new(0.0, 2.0).unwrap(),
            6,
            Interval::new(-0.5, 1.5).unwrap(),
            8,
        )
        .unwrap();
        // diagonal-ish kernel with off-diagonal decay
        let rj = SourceAutocorrelation::General {
            r: Arc::new(|a: f64, b: f64| (1.0 + a * b) * (-8.0 * (a - b).abs()).exp()),
            support: Interval::new(0.0, 2.0).unwrap(),
        };
        let k = receive_covariance(&s, &layout, &rj).unwrap();
        let (src, dst) = match (&layout.source, &layout.dest) {
            (LayoutPoints::Line(a), LayoutPoints::Line(b)) => (a.clone(), b.clone()),
            _ => unreachable!(),
        };
        for i in 0..dst.len() {
            for j in 0..dst.len() {
                let mut acc = Complex::new(0.0, 0.0);
                for a in 0..src.len() {
                    for b in 0..src.len() {
                        acc += scalar_kernel(&s, dst[i] - src[a])
                            * rj.eval(src[a], src[b])
                            * scalar_kernel(&s, dst[j] - src[b]).conj()
                            * layout.source_weights[a]
                            * layout.source_weights[b];
                    }
                }
                assert!(
                    (k.get(i, j) - acc).norm() <= 1e-9 * k.max_abs(),
                    "mismatch at ({i},{j})"
                );
            }
        }
    }

    #[test]
    fn mi_trivial_cases() {
        let id = HermitianMatrix::<f64>::identity(4);
        let zero = HermitianMatrix::<f64>::zeros(4);
        assert!(mutual_information(&zero, &id).unwrap().abs() < 1e-14);
        let mi = mutual_information(&id, &id).unwrap();
        assert!((mi - 4.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn mi_matches_determinant_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let dim = 6;
        let mut rand_psd = |shift: f64| {
            let b: Vec<Complex<f64>> = (0..dim * dim)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let mut m = HermitianMatrix::from_fn(dim, |i, j| {
                let mut acc = Complex::new(0.0, 0.0);
                for k in 0..dim {
                    acc += b[k * dim + i].conj() * b[k * dim + j];
                }
                acc
            });
            m.shift_diagonal(shift);
            m
        };
        let k_e = rand_psd(0.0);
        let k_n = rand_psd(0.5);
        let mi = mutual_information(&k_e, &k_n).unwrap();

        // dense LU determinant oracle
        fn logdet(m: &HermitianMatrix<f64>) -> f64 {
            let n = m.dim();
            let mut a: Vec<Complex<f64>> = m.entries().to_vec();
            let mut acc = 0.0;
            for k in 0..n {
                // partial pivot
                let (piv, _) = (k..n)
                    .map(|r| (r, a[r * n + k].norm()))
                    .max_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
                    .unwrap();
                if piv != k {
                    for c in 0..n {
                        a.swap(k * n + c, piv * n + c);
                    }
                }
                acc += a[k * n + k].norm().ln();
                for r in k + 1..n {
                    let f = a[r * n + k] / a[k * n + k];
                    for c in k..n {
                        let sub = f * a[k * n + c];
                        a[r * n + c] -= sub;
                    }
                }
            }
            acc
        }
        let sum = k_e.add(&k_n).unwrap();
        let oracle = logdet(&sum) - logdet(&k_n);
        assert!((mi - oracle).abs() < 1e-9, "mi {mi} vs oracle {oracle}");
    }

    #[test]
    fn mi_submatrix_monotonicity() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10 {
            let dim = 7;
            let b: Vec<Complex<f64>> = (0..dim * dim)
                .map(|_| Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            let k_e = HermitianMatrix::from_fn(dim, |i, j| {
                let mut acc = Complex::new(0.0, 0.0);
                for k in 0..dim {
                    acc += b[k * dim + i].conj() * b[k * dim + j];
                }
                acc
            });
            let sigma2 = 0.7;
            let full_noise = HermitianMatrix::from_diagonal(&vec![sigma2; dim]);
            let mi_full = mutual_information(&k_e, &full_noise).unwrap();
            let idx: Vec<usize> = (0..dim - 1).collect();
            let sub = k_e.principal_submatrix(&idx);
            let sub_noise = HermitianMatrix::from_diagonal(&vec![sigma2; dim - 1]);
            let mi_sub = mutual_information(&sub, &sub_noise).unwrap();
            assert!(mi_full >= mi_sub - 1e-10);
        }
    }

    #[test]
    fn mi_unitary_invariance() {
        // conjugating both matrices by the same unitary leaves MI unchanged
        let mut k_e = HermitianMatrix::<f64>::zeros(3);
        k_e.set(0, 0, Complex::new(1.0, 0.0));
        k_e.set(1, 1, Complex::new(0.5, 0.0));
        k_e.set(2, 2, Complex::new(0.2, 0.0));
        k_e.set(0, 1, Complex::new(0.1, 0.2));
        let k_n = HermitianMatrix::from_diagonal(&[1.0, 1.0, 1.0]);
        let mi = mutual_information(&k_e, &k_n).unwrap();
        // use eigenvectors of some Hermitian matrix as the unitary
        let mut h = HermitianMatrix::<f64>::zeros(3);
        h.set(0, 1, Complex::new(0.3, -0.4));
        h.set(1, 2, Complex::new(-0.2, 0.6));
        h.set(0, 0, Complex::new(0.9, 0.0));
        let u = eigh(&h).unwrap().eigenvectors;
        let conj = |m: &HermitianMatrix<f64>| {
            HermitianMatrix::from_fn(3, |i, j| {
                let mut acc = Complex::new(0.0, 0.0);
                for a in 0..3 {
                    for b in 0..3 {
                        acc += u[a * 3 + i].conj() * m.get(a, b) * u[b * 3 + j];
                    }
                }
                acc
            })
        };
        let mi2 = mutual_information(&conj(&k_e), &conj(&k_n)).unwrap();
        assert!((mi - mi2).abs() < 1e-10);
    }

    #[test]
    fn sweep_zero_power_and_convergence() {
        let s = scene();
        let rj_zero = stationary(|_| 0.0, 0.0, 2.0);
        let out = normalized_capacity_sweep(&s, 2.0, &[2, 4, 8], &rj_zero, 1.0).unwrap();
        assert!(out.iter().all(|&(_, mi, _)| mi.abs() < 1e-12));

        let rj = stationary(|ds: f64| (-(ds).abs()).exp(), 0.0, 2.0);
        let out = normalized_capacity_sweep(&s, 2.0, &[2, 4, 8, 16, 32, 64], &rj, 1.0).unwrap();
        let diffs: Vec<f64> = out.windows(2).map(|w| (w[1].2 - w[0].2).abs()).collect();
        let last_val = out.last().unwrap().2;
        assert!(
            *diffs.last().unwrap() < 0.01 * last_val.abs(),
            "normalized MI not stabilizing: {diffs:?}"
        );
        assert!(*diffs.last().unwrap() < diffs[0]);
    }

    #[test]
    fn resolution_check_flags_coarse_sources() {
        let s = scene();
        let rj = stationary(|ds: f64| (-(4.0 * ds).abs()).exp(), 0.0, 2.0);
        let fine = SamplingLayout::line(
            Interval::new(0.0, 2.0).unwrap(),
            64,
            Interval::new(0.0, 2.0).unwrap(),
            8,
        )
        .unwrap();
        let change = source_resolution_check(&s, &fine, &rj).unwrap();
        assert!(change < 0.01, "fine grid should be stable, got {change}");
    }
}
