//! Adaptive quadrature built from fixed-order Gauss–Legendre panels.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex;
use once_cell::sync::Lazy;

use crate::error::{Error, Result};
use crate::numerics::Interval;
use crate::real::{from_usize, lit, Real};

/// Gauss–Legendre nodes/weights on [-1, 1], computed once per order in f64
/// and converted into the working scalar on demand.
static GL_CACHE: Lazy<Mutex<HashMap<usize, Arc<Vec<(f64, f64)>>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn gl_rule_f64(n: usize) -> Arc<Vec<(f64, f64)>> {
    let mut cache = GL_CACHE.lock().unwrap();
    if let Some(r) = cache.get(&n) {
        return r.clone();
    }
    let mut rule = Vec::with_capacity(n);
    let m = (n + 1) / 2;
    for i in 0..m {
        // Newton on P_n starting from the Chebyshev-like estimate.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = 0.0;
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * x * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            pp = n as f64 * (x * p0 - p1) / (x * x - 1.0);
            let dx = p0 / pp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.push((-x, w));
    }
    // mirror the negative-half nodes to the full ascending rule; for odd n
    // the middle node is exactly zero (smallest nonzero node is ~1/n)
    let mut nodes: Vec<(f64, f64)> = rule
        .iter()
        .map(|&(x, w)| if x.abs() < 1e-8 { (0.0, w) } else { (x, w) })
        .collect();
    for &(x, w) in rule.iter().rev() {
        if x.abs() > 1e-8 {
            nodes.push((-x, w));
        }
    }
    nodes.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    debug_assert_eq!(nodes.len(), n);
    let arc = Arc::new(nodes);
    cache.insert(n, arc.clone());
    arc
}

/// Gauss–Legendre rule of order `n` converted into scalar `T`.
pub fn gauss_legendre<T: Real>(n: usize) -> Vec<(T, T)> {
    gl_rule_f64(n)
        .iter()
        .map(|&(x, w)| (lit(x), lit(w)))
        .collect()
}

/// Values an integrand may produce (real or complex).
pub trait QuadValue<T: Real>: Copy + Send {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn sub(self, other: Self) -> Self;
    fn scale(self, s: T) -> Self;
    fn norm(self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: T) -> Self {
        self * s
    }
    fn norm(self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn sub(self, other: Self) -> Self {
        self - other
    }
    fn scale(self, s: T) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    fn norm(self) -> T {
        self.norm()
    }
}

fn panel_pair<T, V, F>(f: &F, a: T, b: T, lo_rule: &[(T, T)], hi_rule: &[(T, T)]) -> (V, V)
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let half = (b - a) * lit(0.5);
    let mid = (a + b) * lit(0.5);
    let eval = |rule: &[(T, T)]| {
        let mut acc = V::zero();
        for &(x, w) in rule {
            acc = acc.add(f(mid + half * x).scale(w * half));
        }
        acc
    };
    (eval(lo_rule), eval(hi_rule))
}

const MAX_PANELS: usize = 200_000;

/// Adaptive integration of `f` over `domain` to absolute tolerance `abs_tol`.
///
/// Each panel is estimated with 15- and 31-point Gauss rules; the panel with
/// the largest error estimate is bisected until the summed estimate meets the
/// tolerance. Deterministic for identical inputs.
pub fn integrate<T, V, F>(f: F, domain: Interval<T>, abs_tol: T) -> Result<V>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    integrate_split(f, domain, &[], abs_tol)
}

/// Like [`integrate`], with declared interior split points (e.g. integrable
/// singularities) that seed the initial panel boundaries.
pub fn integrate_split<T, V, F>(
    f: F,
    domain: Interval<T>,
    splits: &[T],
    abs_tol: T,
) -> Result<V>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let g15 = gauss_legendre::<T>(15);
    let g31 = gauss_legendre::<T>(31);

    struct Panel<T, V> {
        a: T,
        b: T,
        value: V,
        err: T,
    }

    let mut edges: Vec<T> = vec![domain.lo()];
    let mut sp: Vec<T> = splits
        .iter()
        .copied()
        .filter(|&s| s > domain.lo() && s < domain.hi())
        .collect();
    sp.sort_by(|a, b| a.partial_cmp(b).unwrap());
    edges.extend(sp);
    edges.push(domain.hi());

    let mut panels: Vec<Panel<T, V>> = Vec::new();
    for w in edges.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (v15, v31) = panel_pair(&f, lo, hi, &g15, &g31);
        panels.push(Panel {
            a: lo,
            b: hi,
            value: v31,
            err: v31.sub(v15).norm(),
        });
    }

    loop {
        let total_err: T = panels.iter().map(|p| p.err).sum();
        if total_err <= abs_tol {
            let mut acc = V::zero();
            for p in &panels {
                acc = acc.add(p.value);
            }
            return Ok(acc);
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Accuracy {
                best_err: total_err.to_f64().unwrap_or(f64::NAN),
                requested: abs_tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        // split the worst panel
        let (worst_idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.err.partial_cmp(&b.1.err).unwrap())
            .unwrap();
        let Panel { a, b, .. } = panels[worst_idx];
        let mid = (a + b) * lit(0.5);
        if mid <= a || mid >= b {
            // interval exhausted at machine precision; accept what we have
            let total: T = panels.iter().map(|p| p.err).sum();
            if total <= abs_tol * lit(16.0) {
                let mut acc = V::zero();
                for p in &panels {
                    acc = acc.add(p.value);
                }
                return Ok(acc);
            }
            return Err(Error::Accuracy {
                best_err: total.to_f64().unwrap_or(f64::NAN),
                requested: abs_tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        let (v15a, v31a) = panel_pair(&f, a, mid, &g15, &g31);
        let (v15b, v31b) = panel_pair(&f, mid, b, &g15, &g31);
        panels[worst_idx] = Panel {
            a,
            b: mid,
            value: v31a,
            err: v31a.sub(v15a).norm(),
        };
        panels.push(Panel {
            a: mid,
            b,
            value: v31b,
            err: v31b.sub(v15b).norm(),
        });
    }
}

/// Non-adaptive panel sweep: `n_panels` equal panels, 15-point Gauss each.
/// Suited to oscillatory integrands where the panel count is chosen from the
/// oscillation frequency.
pub fn integrate_panels<T, V, F>(f: F, domain: Interval<T>, n_panels: usize) -> V
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let g15 = gauss_legendre::<T>(15);
    let width = (domain.hi() - domain.lo()) / from_usize(n_panels.max(1));
    let mut acc = V::zero();
    for i in 0..n_panels.max(1) {
        let a = domain.lo() + width * from_usize(i);
        let b = a + width;
        let half = (b - a) * lit(0.5);
        let mid = (a + b) * lit(0.5);
        for &(x, w) in &g15 {
            acc = acc.add(f(mid + half * x).scale(w * half));
        }
    }
    acc
}
