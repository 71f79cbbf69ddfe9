//! The bent domain `B^d` and its horoballs, epigraphs of `g_c(y, v) = ½|v|² - log y + c` over `y > 0`.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::hilbert::roots::safeguarded_newton;
use crate::hilbert::{validate, Chord, ConvexDomain};
use crate::projective::{AffinePatch, Membership};
use crate::scalar::{tol, Scalar};

/// Relative tolerance on chord parameters of the bent domain.
pub const CHORD_TOL: f64 = 1e-12;

/// Bent horoball of level `c` in the chart `(x, y, v)` of the patch `{x_{d+1} ≠ 0}`; `c = 0` gives `B^d`.
#[derive(Debug, Clone)]
pub struct BentDomain<S: Scalar> {
    dim: usize,
    level: S,
    patch: AffinePatch<S>,
}

/// `g_c(y, v) = ½|v|² - log y + c`.
pub fn bent_graph<S: Scalar>(y: S, v: &[S], c: S) -> S {
    let v2 = v.iter().fold(S::zero(), |a, &x| a + x * x);
    v2 / S::lit(2.0) - y.ln() + c
}

/// `f_c(v) = ½|v|² + c`.
pub fn standard_graph<S: Scalar>(v: &[S], c: S) -> S {
    v.iter().fold(S::zero(), |a, &x| a + x * x) / S::lit(2.0) + c
}

impl<S: Scalar> BentDomain<S> {
    pub fn new(dim: usize, level: S) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension { expected: 2, got: dim });
        }
        Ok(Self {
            dim,
            level,
            patch: AffinePatch::standard(dim + 1, dim),
        })
    }

    pub fn level(&self) -> S {
        self.level
    }

    /// Horospherical level `x - ½|v|² + log y`, the quantity preserved by `B_d`.
    pub fn horo_level(z: &DVector<S>) -> S {
        let d = z.len();
        z[0] - z.rows(2, d - 2).norm_squared() / S::lit(2.0) + z[1].ln()
    }

    /// Height `x - g_c(y, v)`, or `-∞` when `y ≤ 0`.
    pub fn height(&self, z: &DVector<S>) -> S {
        if z[1] <= S::zero() {
            return -S::infinity();
        }
        Self::horo_level(z) - self.level
    }

    /// Smallest positive root of the chord equation along `v`, or `∞` when the ray stays inside.
    fn forward_root(&self, z: &DVector<S>, dir: &DVector<S>) -> Result<S> {
        let d = self.dim;
        let (x, y) = (z[0], z[1]);
        let (dx, dy) = (dir[0], dir[1]);
        let w = z.rows(2, d - 2);
        let u = dir.rows(2, d - 2);
        let uu = u.norm_squared();
        let wu = w.dot(&u);
        let ww = w.norm_squared();
        let two = S::lit(2.0);
        if uu == S::zero() && dy >= S::zero() && dx >= S::zero() {
            return Ok(S::infinity());
        }
        let c = self.level;
        let phi = |t: S| -> (S, S) {
            let yt = y + t * dy;
            if yt <= S::zero() {
                return (S::infinity(), S::infinity());
            }
            let val = (ww + two * t * wu + t * t * uu) / two - yt.ln() + c - x - t * dx;
            let der = wu + t * uu - dy / yt - dx;
            (val, der)
        };
        let hi = if dy < S::zero() {
            -y / dy
        } else {
            let mut hi = S::one();
            let mut steps = 0;
            while phi(hi).0 < S::zero() {
                hi *= two;
                steps += 1;
                if steps > 4000 || !hi.is_finite_val() {
                    return Ok(S::infinity());
                }
            }
            hi
        };
        safeguarded_newton(phi, S::zero(), hi, S::lit(CHORD_TOL).max(S::default_epsilon() * S::lit(8.0)))
    }
}

impl<S: Scalar> ConvexDomain<S> for BentDomain<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn patch(&self) -> &AffinePatch<S> {
        &self.patch
    }

    fn membership(&self, z: &DVector<S>) -> Membership {
        if z.len() != self.dim || z[1] <= S::zero() {
            return Membership::Exterior;
        }
        let h = self.height(z);
        let t = tol::<S>() * (S::one() + z[0].abs());
        if h > t {
            Membership::Interior
        } else if h < -t {
            Membership::Exterior
        } else {
            Membership::Boundary
        }
    }

    /// Ideal points in the closure are exactly the segment `s_∞ = [e_1, e_2]`.
    fn ideal_membership(&self, dir: &DVector<S>) -> Membership {
        let t = tol::<S>() * dir.amax();
        let off_plane = dir.rows(2, self.dim - 2).amax();
        if off_plane <= t && dir[0] * dir[1] >= -t * t {
            Membership::Boundary
        } else {
            Membership::Exterior
        }
    }

    fn chord(&self, z: &DVector<S>, v: &DVector<S>) -> Result<Chord<S>> {
        validate(self.dim, z, v)?;
        if !(self.height(z) > S::zero()) {
            return Err(Error::Domain);
        }
        let scale = v.norm();
        let dir = v / scale;
        let plus = self.forward_root(z, &dir)?;
        let minus = self.forward_root(z, &(-&dir))?;
        Ok(Chord {
            t_minus: -minus / scale,
            t_plus: plus / scale,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projective::ProjectivePoint;

    #[test]
    fn membership_examples() {
        let b = BentDomain::<f64>::new(3, 0.0).unwrap();
        assert_eq!(b.membership(&DVector::from_column_slice(&[1.0, 1.0, 0.0])), Membership::Interior);
        assert_eq!(b.membership(&DVector::from_column_slice(&[0.0, 1.0, 0.0])), Membership::Boundary);
        assert_eq!(b.membership(&DVector::from_column_slice(&[5.0, -1.0, 0.0])), Membership::Exterior);
        for i in 0..2 {
            assert_eq!(b.classify_point(&ProjectivePoint::basis(4, i)), Membership::Boundary);
        }
        let mid = ProjectivePoint::from_slice(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(b.classify_point(&mid), Membership::Boundary);
        let off = ProjectivePoint::from_slice(&[1.0, -1.0, 0.0, 0.0]).unwrap();
        assert_eq!(b.classify_point(&off), Membership::Exterior);
    }

    #[test]
    fn chord_endpoints_lie_on_boundary() {
        let b = BentDomain::<f64>::new(3, 0.0).unwrap();
        let z = DVector::from_column_slice(&[1.5, 0.7, 0.3]);
        let v = DVector::from_column_slice(&[-0.4, 0.2, 1.0]);
        let c = b.chord(&z, &v).unwrap();
        for t in [c.t_minus, c.t_plus] {
            let p = &z + &v * t;
            assert!(b.height(&p).abs() < 1e-10, "{}", b.height(&p));
        }
        let scaled = b.chord(&z, &(&v * 3.0)).unwrap();
        assert!((scaled.t_plus * 3.0 - c.t_plus).abs() < 1e-11);
    }

    #[test]
    fn rays_towards_the_segment_are_infinite() {
        let b = BentDomain::<f64>::new(2, 0.0).unwrap();
        let z = DVector::from_column_slice(&[1.0, 1.0]);
        let c = b.chord(&z, &DVector::from_column_slice(&[1.0, 1.0])).unwrap();
        assert_eq!(c.t_plus, f64::INFINITY);
        assert!(c.t_minus.is_finite());
    }
}
