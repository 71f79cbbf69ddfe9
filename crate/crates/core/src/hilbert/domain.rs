//! Convex domains presented by membership and chord oracles in an affine patch.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::projective::{AffinePatch, Membership, ProjectivePoint};
use crate::scalar::{tol, Scalar};

/// Chord parameters `t⁻ < 0 < t⁺` of the line `z + t v` through an interior point; either may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord<S: Scalar> {
    pub t_minus: S,
    pub t_plus: S,
}

impl<S: Scalar> Chord<S> {
    /// Reversed orientation, the chord along `-v`.
    pub fn reversed(self) -> Self {
        Self {
            t_minus: -self.t_plus,
            t_plus: -self.t_minus,
        }
    }
}

/// A properly convex open set given by oracles in its preferred affine patch.
pub trait ConvexDomain<S: Scalar>: Send + Sync {
    /// Dimension `d` of the domain.
    fn dim(&self) -> usize;

    fn patch(&self) -> &AffinePatch<S>;

    /// Position of an affine point.
    fn membership(&self, z: &DVector<S>) -> Membership;

    /// Position of the ideal point in direction `dir` on the hyperplane at infinity of the patch.
    fn ideal_membership(&self, _dir: &DVector<S>) -> Membership {
        Membership::Exterior
    }

    /// Chord through interior `z` along nonzero `v`, with parameters measured in units of `v`.
    fn chord(&self, z: &DVector<S>, v: &DVector<S>) -> Result<Chord<S>>;

    /// Boundary points `p⁻, p⁺` of the chord, `None` where the chord leaves the patch.
    fn boundary_hit(&self, z: &DVector<S>, v: &DVector<S>) -> Result<(Option<DVector<S>>, Option<DVector<S>>)> {
        let c = self.chord(z, v)?;
        let at = |t: S| t.is_finite_val().then(|| z + v * t);
        Ok((at(c.t_minus), at(c.t_plus)))
    }

    /// Position of a projective point, using the patch chart or the ideal oracle.
    fn classify_point(&self, p: &ProjectivePoint<S>) -> Membership {
        match self.patch().chart(p) {
            Some(z) => self.membership(&z),
            None => self.ideal_membership(&self.patch().direction_of(p)),
        }
    }
}

pub(crate) fn validate<S: Scalar>(dim: usize, z: &DVector<S>, v: &DVector<S>) -> Result<()> {
    if z.len() != dim {
        return Err(Error::Dimension { expected: dim, got: z.len() });
    }
    if v.len() != dim {
        return Err(Error::Dimension { expected: dim, got: v.len() });
    }
    if !(v.amax() > S::zero()) {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Roots of `a t² + b t + c = 0` with `a > 0, c < 0` on either side of zero, computed stably.
pub(crate) fn quadratic_chord<S: Scalar>(a: S, b: S, c: S) -> Chord<S> {
    let two = S::lit(2.0);
    if a <= S::zero() {
        return if b > S::zero() {
            Chord { t_minus: -S::infinity(), t_plus: -c / b }
        } else if b < S::zero() {
            Chord { t_minus: -c / b, t_plus: S::infinity() }
        } else {
            Chord { t_minus: -S::infinity(), t_plus: S::infinity() }
        };
    }
    let disc = (b * b - S::lit(4.0) * a * c).sqrt();
    if b >= S::zero() {
        let tm = (-b - disc) / (two * a);
        Chord { t_minus: tm, t_plus: c / (a * tm) }
    } else {
        let tp = (-b + disc) / (two * a);
        Chord { t_minus: c / (a * tp), t_plus: tp }
    }
}

fn classify_level<S: Scalar>(h: S, scale: S) -> Membership {
    let t = tol::<S>() * (S::one() + scale);
    if h > t {
        Membership::Interior
    } else if h < -t {
        Membership::Exterior
    } else {
        Membership::Boundary
    }
}

/// Ellipsoid `{(z - c)ᵀ M (z - c) < 1}` with `M` symmetric positive definite.
#[derive(Debug, Clone)]
pub struct Ellipsoid<S: Scalar> {
    center: DVector<S>,
    shape: DMatrix<S>,
    patch: AffinePatch<S>,
}

impl<S: Scalar> Ellipsoid<S> {
    pub fn new(center: DVector<S>, shape: DMatrix<S>) -> Result<Self> {
        let d = center.len();
        if shape.nrows() != d || shape.ncols() != d {
            return Err(Error::Dimension { expected: d, got: shape.nrows() });
        }
        if shape.clone().cholesky().is_none() {
            return Err(Error::Model("ellipsoid shape is not positive definite".into()));
        }
        Ok(Self {
            center,
            shape,
            patch: AffinePatch::standard(d + 1, d),
        })
    }

    /// Euclidean ball of radius `r` about the origin.
    pub fn ball(d: usize, r: S) -> Self {
        Self::new(DVector::zeros(d), DMatrix::from_diagonal_element(d, d, S::one() / (r * r))).expect("ball")
    }

    /// Open interval `(a, b)`.
    pub fn interval(a: S, b: S) -> Self {
        let half = (b - a) / S::lit(2.0);
        Self::new(DVector::from_element(1, (a + b) / S::lit(2.0)), DMatrix::from_element(1, 1, S::one() / (half * half)))
            .expect("interval")
    }

    pub fn center(&self) -> &DVector<S> {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<S> {
        &self.shape
    }
}

impl<S: Scalar> ConvexDomain<S> for Ellipsoid<S> {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn patch(&self) -> &AffinePatch<S> {
        &self.patch
    }

    fn membership(&self, z: &DVector<S>) -> Membership {
        let r = z - &self.center;
        classify_level(S::one() - r.dot(&(&self.shape * &r)), S::zero())
    }

    fn chord(&self, z: &DVector<S>, v: &DVector<S>) -> Result<Chord<S>> {
        validate(self.dim(), z, v)?;
        let r = z - &self.center;
        let mv = &self.shape * v;
        let c = r.dot(&(&self.shape * &r)) - S::one();
        if c >= S::zero() {
            return Err(Error::Domain);
        }
        Ok(quadratic_chord(v.dot(&mv), S::lit(2.0) * r.dot(&mv), c))
    }
}

/// Open polytope `{A z < b}`.
#[derive(Debug, Clone)]
pub struct Polytope<S: Scalar> {
    normals: DMatrix<S>,
    offsets: DVector<S>,
    patch: AffinePatch<S>,
}

impl<S: Scalar> Polytope<S> {
    pub fn new(normals: DMatrix<S>, offsets: DVector<S>) -> Result<Self> {
        if normals.nrows() != offsets.len() {
            return Err(Error::Dimension { expected: normals.nrows(), got: offsets.len() });
        }
        let d = normals.ncols();
        Ok(Self {
            normals,
            offsets,
            patch: AffinePatch::standard(d + 1, d),
        })
    }

    /// Simplex with the given `d + 1` vertices.
    pub fn simplex(vertices: &[DVector<S>]) -> Result<Self> {
        let d = vertices.len().saturating_sub(1);
        if d == 0 || vertices.iter().any(|v| v.len() != d) {
            return Err(Error::Dimension { expected: d, got: vertices.first().map_or(0, |v| v.len()) });
        }
        let centroid = vertices.iter().fold(DVector::zeros(d), |a, v| a + v) / S::from_usize(d + 1).expect("count");
        let mut rows = Vec::with_capacity(d + 1);
        let mut offs = Vec::with_capacity(d + 1);
        for skip in 0..=d {
            let face: Vec<&DVector<S>> = vertices.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| v).collect();
            let base = face[0];
            let m = DMatrix::from_fn(d - 1, d, |i, j| face[i + 1][j] - base[j]);
            let normal = if d == 1 {
                DVector::from_element(1, S::one())
            } else {
                let padded = DMatrix::from_fn(d, d, |i, j| if i < d - 1 { m[(i, j)] } else { S::zero() });
                let svd = padded.svd(false, true);
                let vt = svd.v_t.ok_or(Error::Singular)?;
                let (imin, _) = svd
                    .singular_values
                    .iter()
                    .enumerate()
                    .fold((0, S::infinity()), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
                vt.row(imin).transpose()
            };
            let mut n = normal;
            let mut off = n.dot(base);
            if n.dot(&centroid) > off {
                n.neg_mut();
                off = -off;
            }
            rows.push(n.transpose());
            offs.push(off);
        }
        Self::new(DMatrix::from_rows(&rows), DVector::from_vec(offs))
    }
}

impl<S: Scalar> ConvexDomain<S> for Polytope<S> {
    fn dim(&self) -> usize {
        self.normals.ncols()
    }

    fn patch(&self) -> &AffinePatch<S> {
        &self.patch
    }

    fn membership(&self, z: &DVector<S>) -> Membership {
        let slack = &self.offsets - &self.normals * z;
        classify_level(slack.min(), S::zero())
    }

    fn chord(&self, z: &DVector<S>, v: &DVector<S>) -> Result<Chord<S>> {
        validate(self.dim(), z, v)?;
        let slack = &self.offsets - &self.normals * z;
        if slack.min() <= S::zero() {
            return Err(Error::Domain);
        }
        let rate = &self.normals * v;
        let mut chord = Chord { t_minus: -S::infinity(), t_plus: S::infinity() };
        for (s, r) in slack.iter().zip(rate.iter()) {
            if *r > S::zero() {
                chord.t_plus = chord.t_plus.min(*s / *r);
            } else if *r < S::zero() {
                chord.t_minus = chord.t_minus.max(*s / *r);
            }
        }
        Ok(chord)
    }
}

/// Epigraph `{x > ½|w|² + c}` in the chart `(x, w)` of the patch `{x_{d+1} ≠ 0}`.
///
/// With `c = 0` this is the paraboloid model of H^d; with `c > 0` it is the standard horoball of level `c`.
#[derive(Debug, Clone)]
pub struct Paraboloid<S: Scalar> {
    dim: usize,
    level: S,
    patch: AffinePatch<S>,
}

impl<S: Scalar> Paraboloid<S> {
    pub fn new(dim: usize, level: S) -> Self {
        Self {
            dim,
            level,
            patch: AffinePatch::standard(dim + 1, dim),
        }
    }

    pub fn level(&self) -> S {
        self.level
    }

    /// Height `x - ½|w|² - c` above the boundary.
    pub fn height(&self, z: &DVector<S>) -> S {
        let w2 = z.rows(1, self.dim - 1).norm_squared();
        z[0] - w2 / S::lit(2.0) - self.level
    }
}

impl<S: Scalar> ConvexDomain<S> for Paraboloid<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn patch(&self) -> &AffinePatch<S> {
        &self.patch
    }

    fn membership(&self, z: &DVector<S>) -> Membership {
        classify_level(self.height(z), z[0].abs())
    }

    fn ideal_membership(&self, dir: &DVector<S>) -> Membership {
        if dir.rows(1, self.dim - 1).amax() <= tol::<S>() * dir.amax() {
            Membership::Boundary
        } else {
            Membership::Exterior
        }
    }

    fn chord(&self, z: &DVector<S>, v: &DVector<S>) -> Result<Chord<S>> {
        validate(self.dim, z, v)?;
        let h = self.height(z);
        if h <= S::zero() {
            return Err(Error::Domain);
        }
        let w = z.rows(1, self.dim - 1);
        let u = v.rows(1, self.dim - 1);
        let a = u.norm_squared() / S::lit(2.0);
        let b = w.dot(&u) - v[0];
        Ok(quadratic_chord(a, b, -h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_chord_roots() {
        let c = quadratic_chord(1.0_f64, 1.0, -6.0);
        assert!((c.t_minus + 3.0).abs() < 1e-14 && (c.t_plus - 2.0).abs() < 1e-14);
        let c = quadratic_chord(1.0_f64, -1.0, -6.0);
        assert!((c.t_minus + 2.0).abs() < 1e-14 && (c.t_plus - 3.0).abs() < 1e-14);
        let c = quadratic_chord(0.0_f64, 2.0, -6.0);
        assert_eq!(c.t_minus, f64::NEG_INFINITY);
        assert!((c.t_plus - 3.0).abs() < 1e-14);
    }

    #[test]
    fn simplex_contains_centroid() {
        let verts = vec![
            DVector::from_column_slice(&[0.0_f64, 0.0]),
            DVector::from_column_slice(&[1.0, 0.0]),
            DVector::from_column_slice(&[0.0, 1.0]),
        ];
        let s = Polytope::simplex(&verts).unwrap();
        assert_eq!(s.membership(&DVector::from_column_slice(&[0.3, 0.3])), Membership::Interior);
        assert_eq!(s.membership(&DVector::from_column_slice(&[0.6, 0.6])), Membership::Exterior);
        let c = s.chord(&DVector::from_column_slice(&[0.25, 0.25]), &DVector::from_column_slice(&[1.0, 0.0])).unwrap();
        assert!((c.t_minus + 0.25).abs() < 1e-12 && (c.t_plus - 0.5).abs() < 1e-12);
    }

    #[test]
    fn paraboloid_ideal_point_is_boundary() {
        let p = Paraboloid::<f64>::new(3, 0.0);
        let inf = ProjectivePoint::from_slice(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.classify_point(&inf), Membership::Boundary);
        let other = ProjectivePoint::from_slice(&[1.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(p.classify_point(&other), Membership::Exterior);
    }
}
