//! Hermitian eigen-decomposition.
//!
//! Householder reduction to tridiagonal form with accumulated unitary
//! transforms, a diagonal phase similarity to make the tridiagonal real, and
//! an implicit-shift QL sweep for the eigenvalues/eigenvectors.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::numerics::HermitianMatrix;
use crate::real::{lit, Real};

/// Eigen-decomposition of a Hermitian matrix: `a = Q·diag(λ)·Q^H` with the
/// eigenvalues sorted descending and unit-norm eigenvector columns.
#[derive(Debug, Clone)]
pub struct Eigh<T> {
    pub eigenvalues: Vec<T>,
    /// Row-major `dim × dim`; column k is the eigenvector for eigenvalue k.
    pub eigenvectors: Vec<Complex<T>>,
    pub dim: usize,
}

impl<T: Real> Eigh<T> {
    /// Copy of eigenvector column `k`.
    pub fn vector(&self, k: usize) -> Vec<Complex<T>> {
        (0..self.dim)
            .map(|i| self.eigenvectors[i * self.dim + k])
            .collect()
    }
}

fn phase<T: Real>(z: Complex<T>) -> Complex<T> {
    let n = z.norm();
    if n == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        z / n
    }
}

/// Eigen-decomposition of `m`. Deterministic: eigenvalues descending,
/// degenerate subspaces returned in the order the QL sweep produces them.
pub fn eigh<T: Real>(m: &HermitianMatrix<T>) -> Result<Eigh<T>> {
    let n = m.dim();
    let mut a: Vec<Complex<T>> = m.entries().to_vec();
    let czero = Complex::new(T::zero(), T::zero());
    let mut q: Vec<Complex<T>> = vec![czero; n * n];
    for i in 0..n {
        q[i * n + i] = Complex::new(T::one(), T::zero());
    }

    // Householder reduction; after this loop a[] holds a Hermitian
    // tridiagonal matrix (complex subdiagonal) and q the accumulated unitary.
    for k in 0..n.saturating_sub(2) {
        let mlen = n - k - 1;
        let mut x: Vec<Complex<T>> = (0..mlen).map(|i| a[(k + 1 + i) * n + k]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let beta = -phase(x[0]) * xnorm;
        x[0] -= beta;
        let unorm2: T = x.iter().map(|z| z.norm_sqr()).sum();
        if unorm2 == T::zero() {
            continue;
        }
        let u = x;
        let tau = lit::<T>(2.0) / unorm2;

        // p = tau · A_sub · u over the trailing block
        let mut p: Vec<Complex<T>> = vec![czero; mlen];
        for i in 0..mlen {
            let mut acc = czero;
            for j in 0..mlen {
                acc += a[(k + 1 + i) * n + (k + 1 + j)] * u[j];
            }
            p[i] = acc * tau;
        }
        let kappa = {
            let mut acc = czero;
            for i in 0..mlen {
                acc += u[i].conj() * p[i];
            }
            acc * lit::<T>(0.5) * tau
        };
        let w: Vec<Complex<T>> = (0..mlen).map(|i| p[i] - kappa * u[i]).collect();
        // A_sub -= w·u^H + u·w^H
        for i in 0..mlen {
            for j in 0..mlen {
                let upd = w[i] * u[j].conj() + u[i] * w[j].conj();
                a[(k + 1 + i) * n + (k + 1 + j)] -= upd;
            }
        }
        a[(k + 1) * n + k] = beta;
        a[k * n + k + 1] = beta.conj();
        for i in 1..mlen {
            a[(k + 1 + i) * n + k] = czero;
            a[k * n + (k + 1 + i)] = czero;
        }
        // Q ← Q·(I − τ u u^H) applied to trailing columns
        for row in 0..n {
            let mut acc = czero;
            for j in 0..mlen {
                acc += q[row * n + (k + 1 + j)] * u[j];
            }
            let acc = acc * tau;
            for j in 0..mlen {
                q[row * n + (k + 1 + j)] -= acc * u[j].conj();
            }
        }
    }

    // Phase similarity: make the subdiagonal real non-negative, folding the
    // phases into the accumulated columns.
    let mut d: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
    let mut e: Vec<T> = vec![T::zero(); n];
    let mut s = Complex::new(T::one(), T::zero());
    for j in 0..n - 1 {
        let t = a[(j + 1) * n + j];
        e[j] = t.norm();
        let s_next = s * phase(t);
        for row in 0..n {
            q[row * n + (j + 1)] = q[row * n + (j + 1)] * s_next;
        }
        s = s_next;
    }

    ql_implicit(&mut d, &mut e, &mut q, n)?;

    // descending sort, stable in QL output order for ties
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].partial_cmp(&d[i]).unwrap());
    let eigenvalues: Vec<T> = order.iter().map(|&i| d[i]).collect();
    let mut eigenvectors = vec![czero; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            eigenvectors[row * n + new_col] = q[row * n + old_col];
        }
    }

    Ok(Eigh {
        eigenvalues,
        eigenvectors,
        dim: n,
    })
}

/// Implicit-shift QL on a real symmetric tridiagonal, rotating the complex
/// column accumulator `z` alongside.
fn ql_implicit<T: Real>(d: &mut [T], e: &mut [T], z: &mut [Complex<T>], n: usize) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    let eps = T::epsilon();
    for l in 0..n {
        let mut iter = 0usize;
        loop {
            let mut msplit = n - 1;
            for mm in l..n - 1 {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= eps * dd {
                    msplit = mm;
                    break;
                }
            }
            if msplit == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::EigenNonConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (lit::<T>(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            let denom = g + if g >= T::zero() { r.abs() } else { -r.abs() };
            g = d[msplit] - d[l] + e[l] / denom;
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut underflow = false;
            for i in (l..msplit).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[msplit] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + lit::<T>(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1].re;
                    let fi = z[k * n + i + 1].im;
                    let zre = z[k * n + i].re;
                    let zim = z[k * n + i].im;
                    z[k * n + i + 1] = Complex::new(s * zre + c * f, s * zim + c * fi);
                    z[k * n + i] = Complex::new(c * zre - s * f, c * zim - s * fi);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[msplit] = T::zero();
        }
    }
    Ok(())
}
