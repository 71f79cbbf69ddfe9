//! Bracketed root finding for convex chord equations.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Root of `f` in `[lo, hi]` with `f(lo) < 0 < f(hi)` by Newton steps safeguarded by bisection.
///
/// `f` returns the value and derivative; a non-finite value counts as positive (beyond a domain end).
pub fn safeguarded_newton<S: Scalar>(f: impl Fn(S) -> (S, S), mut lo: S, mut hi: S, rel_tol: S) -> Result<S> {
    let two = S::lit(2.0);
    let mut x = hi;
    let (mut fx, mut dfx) = f(x);
    if !fx.is_finite_val() {
        x = (lo + hi) / two;
        (fx, dfx) = f(x);
    }
    for _ in 0..400 {
        if fx == S::zero() {
            return Ok(x);
        }
        if fx.is_finite_val() && fx < S::zero() {
            lo = x;
        } else {
            hi = x;
        }
        let width_tol = rel_tol * (S::one() + lo.abs().max(hi.abs()));
        if hi - lo <= width_tol {
            return Ok((lo + hi) / two);
        }
        let newton = if fx.is_finite_val() && dfx.is_finite_val() && dfx != S::zero() {
            x - fx / dfx
        } else {
            S::infinity()
        };
        let mut next = if newton.is_finite_val() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / two
        };
        if (next - x).abs() <= width_tol {
            let below = f(next - width_tol).0;
            let above = f(next + width_tol).0;
            if below.is_finite_val() && below < S::zero() && !(above.is_finite_val() && above < S::zero()) {
                return Ok(next);
            }
            next = (lo + hi) / two;
        }
        x = next;
        (fx, dfx) = f(x);
    }
    Err(Error::RootFinding)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = safeguarded_newton(|x: f64| (x * x - 2.0, 2.0 * x), 0.0, 10.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn steep_far_end_does_not_stall() {
        let wall = 1.0 - 1e-15;
        let f = |x: f64| if x >= wall { (f64::INFINITY, f64::INFINITY) } else { (-(wall - x).ln() - 0.5, 1.0 / (wall - x)) };
        let r = safeguarded_newton(f, 0.0, wall - 1e-16, 1e-12).unwrap();
        assert!((r - (wall - (-0.5f64).exp())).abs() < 1e-11, "{r}");
    }

    #[test]
    fn handles_infinite_end() {
        let r = safeguarded_newton(
            |x: f64| if x >= 1.0 { (f64::INFINITY, f64::INFINITY) } else { (-(1.0 - x).ln() - 1.0, 1.0 / (1.0 - x)) },
            0.0,
            1.0,
            1e-14,
        )
        .unwrap();
        assert!((r - (1.0 - (-1f64).exp())).abs() < 1e-13);
    }
}
