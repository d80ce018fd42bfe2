//! Bracketed root finding.

use crate::error::{Error, Result};
use crate::numerics::Interval;
use crate::real::{lit, Real};

/// Find a root of `f` inside `bracket`.
///
/// Bisection with a secant acceleration step whenever the secant iterate
/// stays inside the current bracket; falls back to pure bisection otherwise,
/// so convergence is guaranteed for continuous `f` with a sign change.
/// Stops when |f(x)| ≤ tol or the bracket width shrinks below tol.
pub fn find_root<T, F>(f: F, bracket: Interval<T>, tol: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let (mut lo, mut hi) = (bracket.lo(), bracket.hi());
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Bracket {
            lo: lo.to_f64().unwrap_or(f64::NAN),
            hi: hi.to_f64().unwrap_or(f64::NAN),
        });
    }

    for _ in 0..200 {
        // secant candidate, accepted only if it lands strictly inside
        let mut x = hi - fhi * (hi - lo) / (fhi - flo);
        let mid = (lo + hi) * lit(0.5);
        if !(x > lo && x < hi) || !x.is_finite() {
            x = mid;
        }
        let fx = f(x);
        if fx.abs() <= tol || (hi - lo) <= tol {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // keep at least linear shrink: force a bisection step when the
        // secant updates pile onto one side
        if (hi - lo) > bracket.width() * lit(0.5) && x != mid {
            let fm = f(mid);
            if fm == T::zero() {
                return Ok(mid);
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
        }
        if (hi - lo) <= tol {
            return Ok((lo + hi) * lit(0.5));
        }
    }
    Ok((lo + hi) * lit(0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear() {
        let r = find_root(|x: f64| x - 1.0, Interval::new(0.0, 2.0).unwrap(), 1e-14).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn arctan_dispersion() {
        // 2 arctan(x) + x = pi, first branch
        let r = find_root(
            |x: f64| 2.0 * x.atan() + x - std::f64::consts::PI,
            Interval::new(0.0, std::f64::consts::PI).unwrap(),
            1e-14,
        )
        .unwrap();
        assert!((r - 1.306_542_374_188_806_20).abs() < 1e-10);
    }

    #[test]
    fn cosine() {
        let r = find_root(|x: f64| x.cos(), Interval::new(1.0, 2.0).unwrap(), 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn no_sign_change_is_an_error() {
        let e = find_root(|x: f64| x * x + 1.0, Interval::new(-1.0, 1.0).unwrap(), 1e-12);
        assert!(matches!(e, Err(Error::Bracket { .. })));
    }
}
