//! Dense Hermitian matrix storage.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::real::{lit, Real};

/// Dense Hermitian matrix, row-major. Writes keep `a[i][j] = conj(a[j][i])`
/// by construction; [`HermitianMatrix::try_from_entries`] validates it for
/// externally supplied data.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex::new(d, T::zero());
        }
        m
    }

    /// Fill from a generator evaluated on the upper triangle (i ≤ j); the
    /// lower triangle is mirrored and diagonal imaginary parts dropped.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = f(i, j);
                if i == j {
                    m.data[i * dim + j] = Complex::new(v.re, T::zero());
                } else {
                    m.data[i * dim + j] = v;
                    m.data[j * dim + i] = v.conj();
                }
            }
        }
        m
    }

    /// Validate raw row-major entries as Hermitian within `tol` (absolute,
    /// relative to the largest entry), then symmetrize exactly.
    pub fn try_from_entries(dim: usize, entries: Vec<Complex<T>>, tol: T) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::Shape(format!(
                "expected {} entries for dim {dim}, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let scale = entries
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
            .max(T::one());
        let mut worst = T::zero();
        for i in 0..dim {
            for j in i..dim {
                let d = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        if worst > tol * scale {
            return Err(Error::NotHermitian(
                (worst / scale).to_f64().unwrap_or(f64::NAN),
            ));
        }
        let mut m = Self { dim, data: entries };
        for i in 0..dim {
            for j in (i + 1)..dim {
                let avg = (m.data[i * dim + j] + m.data[j * dim + i].conj()) * lit::<T>(0.5);
                m.data[i * dim + j] = avg;
                m.data[j * dim + i] = avg.conj();
            }
            let d = m.data[i * dim + i];
            m.data[i * dim + i] = Complex::new(d.re, T::zero());
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        self.data[i * self.dim + j]
    }

    /// Set `a[i][j]` and mirror into `a[j][i]`.
    pub fn set(&mut self, i: usize, j: usize, v: Complex<T>) {
        if i == j {
            self.data[i * self.dim + j] = Complex::new(v.re, T::zero());
        } else {
            self.data[i * self.dim + j] = v;
            self.data[j * self.dim + i] = v.conj();
        }
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn trace(&self) -> T {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// Largest entry magnitude (max norm).
    pub fn max_abs(&self) -> T {
        self.data.iter().map(|z| z.norm()).fold(T::zero(), T::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape(format!(
                "dim mismatch: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn scaled(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Add `s` to every diagonal entry.
    pub fn shift_diagonal(&mut self, s: T) {
        for i in 0..self.dim {
            self.data[i * self.dim + i].re += s;
        }
    }

    /// Principal submatrix on the given (strictly increasing) index set.
    pub fn principal_submatrix(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        assert!(k > 0 && idx.iter().all(|&i| i < self.dim));
        let mut m = Self::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.data[a * k + b] = self.get(i, j);
            }
        }
        m
    }

    /// y = A·x
    pub fn apply(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(x.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for j in 0..self.dim {
                    acc += self.get(i, j) * x[j];
                }
                acc
            })
            .collect()
    }
}
