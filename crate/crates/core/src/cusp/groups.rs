//! The bent group `B_d`, the degenerate groups `P'_d` and `B'_d`, and orbit checks.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::bent::BentDomain;
use crate::error::{Error, Result};
use crate::hilbert::ConvexDomain;
use crate::projective::{Membership, ProjectiveMap};
use crate::scalar::Scalar;

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}

/// Element `(b, v)` of `B_d`: dilation log `b` and translation `v ∈ R^{d-2}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BentGroupElement<S: Scalar> {
    pub b: S,
    pub v: Vec<S>,
}

impl<S: Scalar> BentGroupElement<S> {
    pub fn new(b: S, v: Vec<S>) -> Self {
        Self { b, v }
    }

    pub fn identity(d: usize) -> Self {
        Self { b: S::zero(), v: vec![S::zero(); d - 2] }
    }

    /// Pure dilation `(b, 0)`.
    pub fn dilation(d: usize, b: S) -> Self {
        Self { b, v: vec![S::zero(); d - 2] }
    }

    /// Pure translation `(0, v)`.
    pub fn translation(v: Vec<S>) -> Self {
        Self { b: S::zero(), v }
    }

    pub fn dim(&self) -> usize {
        self.v.len() + 2
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self {
            b: self.b + other.b,
            v: self.v.iter().zip(&other.v).map(|(a, b)| *a + *b).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        Self { b: -self.b, v: self.v.iter().map(|x| -*x).collect() }
    }

    /// Matrix `[[1, 0, vᵀ, ½|v|² - b], [0, e^b, 0, 0], [0, 0, I, v], [0, 0, 0, 1]]`.
    pub fn matrix(&self) -> DMatrix<S> {
        let d = self.dim();
        let mut m = DMatrix::identity(d + 1, d + 1);
        let mut v2 = S::zero();
        for (i, &vi) in self.v.iter().enumerate() {
            m[(0, i + 2)] = vi;
            m[(i + 2, d)] = vi;
            v2 += vi * vi;
        }
        m[(0, d)] = v2 / S::lit(2.0) - self.b;
        m[(1, 1)] = self.b.exp();
        m
    }

    pub fn map(&self) -> ProjectiveMap<S> {
        ProjectiveMap::new(self.matrix()).expect("B_d elements are invertible")
    }

    /// Affine action `(x, y, w) ↦ (x + v·w + ½|v|² - b, e^b y, w + v)` on the chart.
    pub fn apply_chart(&self, z: &DVector<S>) -> DVector<S> {
        let d = self.dim();
        let mut out = z.clone();
        let mut vw = S::zero();
        let mut v2 = S::zero();
        for (i, &vi) in self.v.iter().enumerate() {
            vw += vi * z[i + 2];
            v2 += vi * vi;
            out[i + 2] = z[i + 2] + vi;
        }
        out[0] = z[0] + vw + v2 / S::lit(2.0) - self.b;
        out[1] = z[1] * self.b.exp();
        debug_assert_eq!(out.len(), d);
        out
    }
}

/// Checked constructor for `B_d` elements.
pub fn bent_group_element<S: Scalar>(d: usize, b: S, v: &[S]) -> Result<ProjectiveMap<S>> {
    check_len(d - 2, v.len())?;
    Ok(BentGroupElement::new(b, v.to_vec()).map())
}

/// Element of `P'_d` with data `(a, u)` or of `B'_d` with data `(t, u)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DegenerateGroupElement<S: Scalar> {
    PPrime { a: S, u: Vec<S> },
    BPrime { t: S, u: Vec<S> },
}

/// Which degenerate group a lattice lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DegenerateVariant {
    PPrime,
    BPrime,
}

impl<S: Scalar> DegenerateGroupElement<S> {
    /// Element with parameter vector `(a, u)` or `(t, u)` of length `d - 1`.
    pub fn from_params(variant: DegenerateVariant, params: &[S]) -> Self {
        let u = params[1..].to_vec();
        match variant {
            DegenerateVariant::PPrime => Self::PPrime { a: params[0], u },
            DegenerateVariant::BPrime => Self::BPrime { t: params[0], u },
        }
    }

    fn u(&self) -> &[S] {
        match self {
            Self::PPrime { u, .. } | Self::BPrime { u, .. } => u,
        }
    }

    pub fn dim(&self) -> usize {
        self.u().len() + 2
    }

    pub fn matrix(&self) -> DMatrix<S> {
        let d = self.dim();
        let mut m = DMatrix::identity(d + 1, d + 1);
        let u = self.u();
        let u2 = u.iter().fold(S::zero(), |a, &x| a + x * x);
        for (i, &ui) in u.iter().enumerate() {
            m[(0, i + 2)] = ui;
            m[(i + 2, d)] = ui;
        }
        let two = S::lit(2.0);
        match self {
            Self::PPrime { a, .. } => {
                m[(0, 1)] = *a;
                m[(1, d)] = -*a;
                m[(0, d)] = (u2 - *a * *a) / two;
            }
            Self::BPrime { t, .. } => {
                m[(1, 1)] = t.exp();
                m[(0, d)] = u2 / two + *t;
            }
        }
        m
    }
}

/// Result of following sample points along a `B_d` orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    pub samples: usize,
    pub membership_changes: usize,
    pub max_level_drift: f64,
}

/// Checks that `element` preserves `B^d` and the horospherical level of each sample point over `steps` iterates.
pub fn bent_orbit_check<S: Scalar>(element: &BentGroupElement<S>, points: &[DVector<S>], steps: usize) -> Result<OrbitReport> {
    let d = element.dim();
    let domain = BentDomain::new(d, S::zero())?;
    let mut report = OrbitReport { samples: points.len(), membership_changes: 0, max_level_drift: 0.0 };
    for p in points {
        check_len(d, p.len())?;
        let start_member = domain.membership(p);
        let start_level = BentDomain::horo_level(p);
        let mut z = p.clone();
        for _ in 0..steps {
            z = element.apply_chart(&z);
            let m = domain.membership(&z);
            if m != start_member && !(m == Membership::Boundary || start_member == Membership::Boundary) {
                report.membership_changes += 1;
            }
            let drift = (BentDomain::horo_level(&z) - start_level).abs().to_f64_lossy();
            report.max_level_drift = report.max_level_drift.max(drift);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::QuadraticForm;

    #[test]
    fn bent_matrix_shape() {
        let g = BentGroupElement::new(0.3_f64, vec![0.5]);
        let m = g.matrix();
        assert!((m[(1, 1)] - 0.3f64.exp()).abs() < 1e-15);
        assert!((m[(0, 3)] - (0.125 - 0.3)).abs() < 1e-15);
        assert_eq!(BentGroupElement::<f64>::identity(3).matrix(), DMatrix::identity(4, 4));
    }

    #[test]
    fn chart_action_matches_matrix() {
        let g = BentGroupElement::new(-0.4_f64, vec![0.7, -0.2]);
        let z = DVector::from_column_slice(&[2.0, 0.5, 0.1, 0.3]);
        let lifted = DVector::from_column_slice(&[2.0, 0.5, 0.1, 0.3, 1.0]);
        let img = g.matrix() * lifted;
        let chart = g.apply_chart(&z);
        for i in 0..4 {
            assert!((img[i] / img[4] - chart[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn p_prime_preserves_q_prime() {
        let g = DegenerateGroupElement::PPrime { a: 0.8_f64, u: vec![-1.3, 0.4] };
        let q = QuadraticForm::degenerate_parabolic(4);
        assert!(q.preservation_residual(&g.matrix()) < 1e-14);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(bent_group_element(3, 0.1_f64, &[1.0, 2.0]), Err(Error::Dimension { .. })));
    }
}
