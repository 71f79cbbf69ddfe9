//! Points, hyperplanes and maps of real projective space and its sphere lift.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::scalar::{tol, Scalar};

/// Position of a point relative to a convex domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Interior,
    Boundary,
    Exterior,
}

fn canonical_sign<S: Scalar>(v: &mut DVector<S>) {
    let t = tol::<S>();
    if let Some(first) = v.iter().copied().find(|c| c.abs() > t) {
        if first < S::zero() {
            v.neg_mut();
        }
    }
}

fn unit<S: Scalar>(v: DVector<S>) -> Result<DVector<S>> {
    let n = v.norm();
    if !(n > S::zero()) || !n.is_finite_val() {
        return Err(Error::ZeroVector);
    }
    Ok(v / n)
}

/// Projective distance between unit representatives, insensitive to sign.
fn sign_free_distance<S: Scalar>(a: &DVector<S>, b: &DVector<S>) -> S {
    (a - b).amax().min((a + b).amax())
}

/// A point of RP^d stored as a canonical unit representative.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint<S: Scalar> {
    coords: DVector<S>,
}

impl<S: Scalar> ProjectivePoint<S> {
    pub fn new(coords: DVector<S>) -> Result<Self> {
        let mut coords = unit(coords)?;
        canonical_sign(&mut coords);
        Ok(Self { coords })
    }

    pub fn from_slice(coords: &[S]) -> Result<Self> {
        Self::new(DVector::from_column_slice(coords))
    }

    /// Standard basis point `[e_i]` of RP^{n-1}.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = S::one();
        Self { coords: v }
    }

    pub fn coords(&self) -> &DVector<S> {
        &self.coords
    }

    /// Number of homogeneous coordinates, `d + 1`.
    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn approx_eq(&self, other: &Self, tolerance: S) -> bool {
        self.len() == other.len() && sign_free_distance(&self.coords, &other.coords) <= tolerance
    }
}

/// A point of the sphere S^d, the double cover of RP^d.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint<S: Scalar> {
    coords: DVector<S>,
}

impl<S: Scalar> SpherePoint<S> {
    pub fn new(coords: DVector<S>) -> Result<Self> {
        Ok(Self {
            coords: unit(coords)?,
        })
    }

    pub fn coords(&self) -> &DVector<S> {
        &self.coords
    }

    pub fn project(&self) -> ProjectivePoint<S> {
        ProjectivePoint::new(self.coords.clone()).expect("unit vector")
    }

    pub fn antipode(&self) -> Self {
        Self {
            coords: -self.coords.clone(),
        }
    }

    /// Euclidean distance on the unit sphere representatives.
    pub fn distance(&self, other: &Self) -> S {
        (&self.coords - &other.coords).norm()
    }
}

/// A projective hyperplane given by a canonical unit covector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveHyperplane<S: Scalar> {
    covector: DVector<S>,
}

impl<S: Scalar> ProjectiveHyperplane<S> {
    pub fn new(covector: DVector<S>) -> Result<Self> {
        let mut covector = unit(covector)?;
        canonical_sign(&mut covector);
        Ok(Self { covector })
    }

    /// The coordinate hyperplane `{x_i = 0}`.
    pub fn coordinate(n: usize, i: usize) -> Self {
        Self::new(DVector::from_fn(n, |k, _| if k == i { S::one() } else { S::zero() }))
            .expect("basis covector")
    }

    pub fn covector(&self) -> &DVector<S> {
        &self.covector
    }

    pub fn pairing(&self, x: &ProjectivePoint<S>) -> S {
        self.covector.dot(x.coords())
    }

    pub fn incident(&self, x: &ProjectivePoint<S>) -> bool {
        self.pairing(x).abs() <= tol::<S>()
    }

    pub fn approx_eq(&self, other: &Self, tolerance: S) -> bool {
        self.covector.len() == other.covector.len()
            && sign_free_distance(&self.covector, &other.covector) <= tolerance
    }
}

/// A projective transformation stored as a representative with `|det| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveMap<S: Scalar> {
    matrix: DMatrix<S>,
}

impl<S: Scalar> ProjectiveMap<S> {
    pub fn new(matrix: DMatrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension {
                expected: matrix.nrows(),
                got: matrix.ncols(),
            });
        }
        let n = matrix.nrows();
        let det = matrix.determinant();
        let scale = matrix.amax();
        let nf = S::from_usize(n).expect("dimension");
        if !(det.abs() > S::zero())
            || !det.is_finite_val()
            || det.abs() <= S::default_epsilon() * scale.powf(nf)
        {
            return Err(Error::Singular);
        }
        let factor = det.abs().powf(S::one() / nf);
        Ok(Self {
            matrix: matrix / factor,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n),
        }
    }

    /// Wraps a matrix already known to satisfy `|det| = 1`.
    pub(crate) fn from_normalized(matrix: DMatrix<S>) -> Self {
        Self { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<S> {
        self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.nrows()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(&self.matrix * &other.matrix).unwrap_or_else(|_| Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn inverse(&self) -> Self {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .expect("normalized map is invertible");
        Self::new(inv.clone()).unwrap_or(Self { matrix: inv })
    }

    pub fn conjugate_by(&self, g: &Self) -> Self {
        g.compose(self).compose(&g.inverse())
    }

    pub fn apply(&self, x: &ProjectivePoint<S>) -> ProjectivePoint<S> {
        ProjectivePoint::new(&self.matrix * x.coords()).expect("invertible map keeps nonzero vectors")
    }

    pub fn apply_sphere(&self, x: &SpherePoint<S>) -> SpherePoint<S> {
        SpherePoint::new(&self.matrix * x.coords()).expect("invertible map keeps nonzero vectors")
    }

    /// Image of a hyperplane, acting on covectors by the inverse transpose.
    pub fn apply_hyperplane(&self, h: &ProjectiveHyperplane<S>) -> ProjectiveHyperplane<S> {
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .expect("normalized map is invertible");
        ProjectiveHyperplane::new(inv.transpose() * h.covector()).expect("nonzero covector")
    }

    /// Equality of projective classes, i.e. `M1 = ±M2` up to `tolerance` in max norm.
    pub fn approx_eq(&self, other: &Self, tolerance: S) -> bool {
        self.size() == other.size()
            && (&self.matrix - &other.matrix)
                .amax()
                .min((&self.matrix + &other.matrix).amax())
                <= tolerance
    }

    /// Max-norm distance of the class to the identity.
    pub fn identity_residual(&self) -> S {
        let id = DMatrix::<S>::identity(self.size(), self.size());
        (&self.matrix - &id).amax().min((&self.matrix + &id).amax())
    }
}

/// Applies `g` to `x`, returning the canonical representative.
pub fn apply_map<S: Scalar>(g: &ProjectiveMap<S>, x: &ProjectivePoint<S>) -> ProjectivePoint<S> {
    g.apply(x)
}

/// Affine chart on the complement of a hyperplane.
#[derive(Debug, Clone, PartialEq)]
pub struct AffinePatch<S: Scalar> {
    at_infinity: ProjectiveHyperplane<S>,
    origin: DVector<S>,
    basis: DMatrix<S>,
}

impl<S: Scalar> AffinePatch<S> {
    pub fn new(at_infinity: ProjectiveHyperplane<S>) -> Self {
        let phi = at_infinity.covector().clone();
        let n = phi.len();
        let origin = phi.clone();
        let mut cols: Vec<DVector<S>> = Vec::with_capacity(n.saturating_sub(1));
        for i in 0..n {
            if cols.len() + 1 == n {
                break;
            }
            let mut v = DVector::zeros(n);
            v[i] = S::one();
            v -= &phi * phi[i];
            for c in &cols {
                let proj = c.dot(&v);
                v -= c * proj;
            }
            let norm = v.norm();
            if norm > S::lit(1e-6) {
                cols.push(v / norm);
            }
        }
        let basis = DMatrix::from_columns(&cols);
        Self {
            at_infinity,
            origin,
            basis,
        }
    }

    /// Patch `{x_k ≠ 0}` whose chart lists the remaining coordinates divided by `x_k`.
    pub fn standard(n: usize, k: usize) -> Self {
        Self::new(ProjectiveHyperplane::coordinate(n, k))
    }

    pub fn at_infinity(&self) -> &ProjectiveHyperplane<S> {
        &self.at_infinity
    }

    /// Dimension of the patch.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Affine coordinates, or `None` on the hyperplane at infinity.
    pub fn chart(&self, x: &ProjectivePoint<S>) -> Option<DVector<S>> {
        self.chart_vector(x.coords())
    }

    pub fn chart_vector(&self, x: &DVector<S>) -> Option<DVector<S>> {
        let s = self.at_infinity.covector().dot(x);
        if s.abs() <= tol::<S>() * x.norm() {
            return None;
        }
        let lifted = x / s;
        Some(self.basis.tr_mul(&lifted))
    }

    /// Homogeneous lift `origin + B a` of affine coordinates.
    pub fn lift(&self, a: &DVector<S>) -> DVector<S> {
        &self.origin + &self.basis * a
    }

    /// Lift of an affine direction to a vector on the hyperplane at infinity.
    pub fn lift_direction(&self, v: &DVector<S>) -> DVector<S> {
        &self.basis * v
    }

    /// Affine direction of a point on the hyperplane at infinity.
    pub fn direction_of(&self, x: &ProjectivePoint<S>) -> DVector<S> {
        self.basis.tr_mul(x.coords())
    }

    pub fn unchart(&self, a: &DVector<S>) -> ProjectivePoint<S> {
        ProjectivePoint::new(self.lift(a)).expect("lift is nonzero")
    }
}

/// Projective line through two distinct points, parametrized by an angle.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveLine<S: Scalar> {
    a: DVector<S>,
    b: DVector<S>,
}

impl<S: Scalar> ProjectiveLine<S> {
    /// Point `[cos s · x̂ + sin s · ŷ]`.
    pub fn point(&self, s: S) -> ProjectivePoint<S> {
        ProjectivePoint::new(&self.a * s.cos() + &self.b * s.sin()).expect("independent spanning vectors")
    }

    /// Distance of a point from the plane spanned by the line.
    pub fn residual(&self, x: &ProjectivePoint<S>) -> S {
        let (u1, u2) = orthonormal_pair(&self.a, &self.b);
        let c = x.coords();
        (c - &u1 * u1.dot(c) - &u2 * u2.dot(c)).norm()
    }

    pub fn contains(&self, x: &ProjectivePoint<S>) -> bool {
        self.residual(x) <= tol::<S>()
    }
}

pub fn line_through<S: Scalar>(x: &ProjectivePoint<S>, y: &ProjectivePoint<S>) -> Result<ProjectiveLine<S>> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            got: y.len(),
        });
    }
    let (_, u2) = orthonormal_pair(x.coords(), y.coords());
    if !(u2.norm() > S::zero()) {
        return Err(Error::DegenerateLine);
    }
    let cross = x.coords().dot(y.coords());
    if S::one() - cross.abs() <= tol::<S>() * tol::<S>() || sign_free_distance(x.coords(), y.coords()) <= tol::<S>() {
        return Err(Error::DegenerateLine);
    }
    Ok(ProjectiveLine {
        a: x.coords().clone(),
        b: y.coords().clone(),
    })
}

fn orthonormal_pair<S: Scalar>(a: &DVector<S>, b: &DVector<S>) -> (DVector<S>, DVector<S>) {
    let u1 = a.normalize();
    let w = b - &u1 * u1.dot(b);
    let n = w.norm();
    if n > S::zero() {
        (u1, w / n)
    } else {
        (u1, DVector::zeros(a.len()))
    }
}

fn det2<S: Scalar>(a: (S, S), b: (S, S)) -> S {
    a.0 * b.1 - a.1 * b.0
}

/// Cross-ratio `[p:x:y:q] = |py|·|qx| / (|px|·|qy|)` of four collinear points.
pub fn cross_ratio<S: Scalar>(
    p: &ProjectivePoint<S>,
    x: &ProjectivePoint<S>,
    y: &ProjectivePoint<S>,
    q: &ProjectivePoint<S>,
) -> Result<S> {
    let n = p.len();
    for other in [x, y, q] {
        if other.len() != n {
            return Err(Error::Dimension {
                expected: n,
                got: other.len(),
            });
        }
    }
    let t = tol::<S>();
    let (u1, u2) = orthonormal_pair(p.coords(), q.coords());
    if sign_free_distance(p.coords(), q.coords()) <= t {
        return Err(Error::DegenerateCrossRatio);
    }
    let coords = |v: &DVector<S>| -> Result<(S, S)> {
        let c = (u1.dot(v), u2.dot(v));
        let residual = (v - &u1 * c.0 - &u2 * c.1).norm();
        if residual > t {
            return Err(Error::Collinearity {
                residual: residual.to_f64_lossy(),
            });
        }
        Ok(c)
    };
    let (cp, cx, cy, cq) = (
        coords(p.coords())?,
        coords(x.coords())?,
        coords(y.coords())?,
        coords(q.coords())?,
    );
    let px = det2(cp, cx).abs();
    let qy = det2(cq, cy).abs();
    if px <= t || qy <= t {
        return Err(Error::DegenerateCrossRatio);
    }
    Ok(det2(cp, cy).abs() * det2(cq, cx).abs() / (px * qy))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> ProjectivePoint<f64> {
        ProjectivePoint::from_slice(c).unwrap()
    }

    #[test]
    fn cross_ratio_on_affine_line() {
        let r = cross_ratio(&pt(&[-1.0, 1.0]), &pt(&[0.0, 1.0]), &pt(&[0.5, 1.0]), &pt(&[1.0, 1.0])).unwrap();
        assert!((r - 3.0).abs() < 1e-12);
        let r = cross_ratio(&pt(&[-1.0, 1.0]), &pt(&[0.2, 1.0]), &pt(&[0.2, 1.0]), &pt(&[1.0, 1.0])).unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cross_ratio_errors() {
        let e = cross_ratio(&pt(&[1.0, 0.0, 0.0]), &pt(&[0.0, 1.0, 0.0]), &pt(&[0.0, 0.0, 1.0]), &pt(&[1.0, 1.0, 0.0]));
        assert!(matches!(e, Err(Error::Collinearity { .. })));
        let e = cross_ratio(&pt(&[0.0, 1.0]), &pt(&[0.0, 1.0]), &pt(&[0.5, 1.0]), &pt(&[1.0, 1.0]));
        assert_eq!(e, Err(Error::DegenerateCrossRatio));
    }

    #[test]
    fn apply_map_examples() {
        let x = pt(&[0.3, -0.2, 0.9]);
        assert!(ProjectiveMap::identity(3).apply(&x).approx_eq(&x, 1e-14));
        let two = ProjectiveMap::new(DMatrix::from_diagonal_element(3, 3, 2.0)).unwrap();
        assert!(two.apply(&x).approx_eq(&x, 1e-14));
        let swap = ProjectiveMap::new(DMatrix::from_row_slice(3, 3, &[0., 1., 0., 1., 0., 0., 0., 0., 1.])).unwrap();
        assert!(swap.apply(&pt(&[1.0, 0.0, 0.0])).approx_eq(&pt(&[0.0, 1.0, 0.0]), 1e-14));
    }

    #[test]
    fn line_examples() {
        let l = line_through(&pt(&[1.0, 0.0, 0.0]), &pt(&[0.0, 1.0, 0.0])).unwrap();
        assert!(!l.contains(&pt(&[0.0, 0.0, 1.0])));
        assert!(l.point(0.0).approx_eq(&pt(&[1.0, 0.0, 0.0]), 1e-14));
        assert!(l.point(std::f64::consts::FRAC_PI_2).approx_eq(&pt(&[0.0, 1.0, 0.0]), 1e-14));
        assert!(l.point(std::f64::consts::FRAC_PI_4).approx_eq(&pt(&[1.0, 1.0, 0.0]), 1e-14));
        assert_eq!(line_through(&pt(&[1.0, 2.0]), &pt(&[-2.0, -4.0])), Err(Error::DegenerateLine));
    }

    #[test]
    fn canonical_sign_and_zero() {
        let p = pt(&[0.0, -2.0, 1.0]);
        assert!(p.coords()[1] > 0.0);
        assert_eq!(ProjectivePoint::<f64>::from_slice(&[0.0, 0.0]), Err(Error::ZeroVector));
    }

    #[test]
    fn standard_patch_divides_by_coordinate() {
        let patch = AffinePatch::<f64>::standard(4, 3);
        let a = patch.chart(&pt(&[2.0, 4.0, -6.0, 2.0])).unwrap();
        assert!((a - DVector::from_column_slice(&[1.0, 2.0, -3.0])).amax() < 1e-14);
        assert!(patch.chart(&pt(&[1.0, 0.0, 0.0, 0.0])).is_none());
    }

    #[test]
    fn map_normalization_is_idempotent() {
        let m = ProjectiveMap::new(DMatrix::from_row_slice(2, 2, &[2.0_f64, 1.0, 0.0, 3.0])).unwrap();
        assert!((m.matrix().determinant().abs() - 1.0).abs() < 1e-14);
        let again = ProjectiveMap::new(m.matrix().clone()).unwrap();
        assert!(again.approx_eq(&m, 1e-14));
        assert_eq!(ProjectiveMap::new(DMatrix::<f64>::zeros(2, 2)), Err(Error::Singular));
    }
}
