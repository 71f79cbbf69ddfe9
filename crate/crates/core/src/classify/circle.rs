//! Piecewise-affine developing map of the affine circle obtained by bending at signed points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Intersection point `p ∈ [0, 1)` of the wall with a cusp curve, with orientation sign `ε = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignedPoint {
    pub p: f64,
    pub sign: i8,
}

/// Developing map `D̄_t: R → R` with holonomy `x ↦ scale·x + offset` for the unit translation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineCircle {
    pub points: Vec<SignedPoint>,
    pub t: f64,
    pub scale: f64,
    pub offset: f64,
    /// Slopes on `(p_i, p_{i+1})` for `i = 0..k`, the last interval wrapping to `p_0 + 1`.
    slopes: Vec<f64>,
}

impl AffineCircle {
    fn breakpoint(&self, j: i64) -> f64 {
        let k = self.points.len() as i64;
        self.points[j.rem_euclid(k) as usize].p + j.div_euclid(k) as f64
    }

    /// Slope of `D̄_t` on `(b_j, b_{j+1})`.
    fn slope(&self, j: i64) -> f64 {
        let k = self.points.len() as i64;
        self.slopes[j.rem_euclid(k) as usize] * self.scale.powi(j.div_euclid(k) as i32)
    }

    /// `D̄_t(x)`, normalized to be the identity on `[p_k - 1, p_1]`.
    pub fn eval(&self, x: f64) -> f64 {
        if self.points.is_empty() {
            return x;
        }
        let b0 = self.breakpoint(0);
        if x >= b0 {
            let mut j = 0i64;
            let mut value = b0;
            while self.breakpoint(j + 1) <= x {
                value += self.slope(j) * (self.breakpoint(j + 1) - self.breakpoint(j));
                j += 1;
            }
            value + self.slope(j) * (x - self.breakpoint(j))
        } else {
            let mut j = -1i64;
            let mut value = b0;
            while self.breakpoint(j) > x {
                value -= self.slope(j) * (self.breakpoint(j + 1) - self.breakpoint(j));
                j -= 1;
            }
            value - self.slope(j) * (self.breakpoint(j + 1) - x)
        }
    }

    /// Graph samples `(x, D̄_t(x))` on `[lo, hi]`, including every breakpoint.
    pub fn graph(&self, lo: f64, hi: f64, per_unit: usize) -> Vec<(f64, f64)> {
        let mut xs: Vec<f64> = (0..=((hi - lo) * per_unit as f64).ceil() as usize)
            .map(|i| (lo + i as f64 / per_unit as f64).min(hi))
            .collect();
        if !self.points.is_empty() {
            let k = self.points.len() as i64;
            let first = (lo.floor() as i64 - 1) * k;
            let last = (hi.ceil() as i64 + 1) * k;
            xs.extend((first..=last).map(|j| self.breakpoint(j)).filter(|b| *b >= lo && *b <= hi));
        }
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs.into_iter().map(|x| (x, self.eval(x))).collect()
    }

    /// `a - b`, the signed count of intersection points.
    pub fn signed_count(&self) -> i64 {
        self.points.iter().map(|p| p.sign as i64).sum()
    }
}

/// Builds `D̄_t` by scaling the half line to the right of each lift of `p_i` by `e^{ε_i t}`.
pub fn affine_circle_developing(points: &[SignedPoint], t: f64) -> Result<AffineCircle> {
    for (i, sp) in points.iter().enumerate() {
        if !(0.0..1.0).contains(&sp.p) || (sp.sign != 1 && sp.sign != -1) {
            return Err(Error::Order);
        }
        if i > 0 && sp.p <= points[i - 1].p {
            return Err(Error::Order);
        }
    }
    let mut slopes = Vec::with_capacity(points.len());
    let mut s = 1.0;
    for sp in points {
        s *= (sp.sign as f64 * t).exp();
        slopes.push(s);
    }
    let scale = slopes.last().copied().unwrap_or(1.0);
    let mut circle = AffineCircle { points: points.to_vec(), t, scale, offset: 1.0, slopes };
    if !points.is_empty() {
        let b0 = points[0].p;
        circle.offset = circle.eval(b0 + 1.0) - scale * b0;
    }
    Ok(circle)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(p: f64, sign: i8) -> SignedPoint {
        SignedPoint { p, sign }
    }

    #[test]
    fn scale_examples() {
        assert_eq!(affine_circle_developing(&[], 0.7).unwrap().scale, 1.0);
        let c = affine_circle_developing(&[sp(0.5, 1)], 0.7).unwrap();
        assert!((c.scale - 0.7f64.exp()).abs() < 1e-15);
        let c = affine_circle_developing(&[sp(0.3, 1), sp(0.6, -1)], 1.3).unwrap();
        assert!((c.scale - 1.0).abs() < 1e-15);
    }

    #[test]
    fn equivariance_and_slope_break() {
        let c = affine_circle_developing(&[sp(0.2, 1), sp(0.5, 1), sp(0.9, -1)], 0.4).unwrap();
        for x in [-2.3, -0.1, 0.0, 0.35, 0.77, 1.9, 3.2] {
            assert!((c.eval(x + 1.0) - (c.scale * c.eval(x) + c.offset)).abs() < 1e-12);
        }
        let one = affine_circle_developing(&[sp(0.5, 1)], 0.7).unwrap();
        assert!((one.eval(0.4) - 0.4).abs() < 1e-15);
        assert!((one.eval(0.6) - (0.5 + 0.1 * 0.7f64.exp())).abs() < 1e-15);
        let delta = 0.3;
        assert!((one.eval(1.0 + delta) - one.eval(1.0) - one.scale * delta).abs() < 1e-14);
    }

    #[test]
    fn order_is_checked() {
        assert_eq!(affine_circle_developing(&[sp(0.6, 1), sp(0.3, 1)], 1.0), Err(Error::Order));
        assert_eq!(affine_circle_developing(&[sp(1.0, 1)], 1.0), Err(Error::Order));
    }
}
