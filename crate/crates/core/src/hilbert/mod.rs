//! Hilbert metric, Finsler norm and Busemann volume of convex domains given as oracles.

mod directions;
mod domain;
pub mod roots;
mod volume;

pub use directions::{DirectionSet, DEFAULT_DIRECTIONS};
pub use domain::{Chord, ConvexDomain, Ellipsoid, Paraboloid, Polytope};
pub(crate) use domain::validate;
pub use volume::{
    busemann_volume, integrate, BoxRegion, Budget, DensityField, DirectDensity, Region, VolumeEstimate, SHARD_SIZE,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::projective::{Membership, ProjectivePoint};
use crate::scalar::Scalar;

fn interior<S: Scalar, D: ConvexDomain<S> + ?Sized>(domain: &D, z: &DVector<S>) -> Result<()> {
    if z.len() != domain.dim() {
        return Err(Error::Dimension { expected: domain.dim(), got: z.len() });
    }
    match domain.membership(z) {
        Membership::Interior => Ok(()),
        _ => Err(Error::Domain),
    }
}

/// Hilbert distance `½ ln [p:x:y:q]` of interior chart points.
pub fn hilbert_distance<S: Scalar, D: ConvexDomain<S> + ?Sized>(domain: &D, x: &DVector<S>, y: &DVector<S>) -> Result<S> {
    interior(domain, x)?;
    interior(domain, y)?;
    let v = y - x;
    let len = v.norm();
    if len == S::zero() {
        return Ok(S::zero());
    }
    let unit = &v / len;
    let c = domain.chord(x, &unit)?;
    let back = S::one() + len / (-c.t_minus);
    let ahead = S::one() - len / c.t_plus;
    if !(ahead > S::zero()) {
        return Err(Error::Domain);
    }
    Ok((back.ln() - ahead.ln()) / S::lit(2.0))
}

/// Hilbert distance of projective points, computed in the preferred patch of the domain.
pub fn hilbert_distance_points<S: Scalar, D: ConvexDomain<S> + ?Sized>(
    domain: &D,
    x: &ProjectivePoint<S>,
    y: &ProjectivePoint<S>,
) -> Result<S> {
    let cx = domain.patch().chart(x).ok_or(Error::Domain)?;
    let cy = domain.patch().chart(y).ok_or(Error::Domain)?;
    hilbert_distance(domain, &cx, &cy)
}

/// Finsler norm `(|v|/2)(1/|xp⁻| + 1/|xp⁺|)` of the tangent vector `v` at `x`.
pub fn finsler_norm<S: Scalar, D: ConvexDomain<S> + ?Sized>(domain: &D, x: &DVector<S>, v: &DVector<S>) -> Result<S> {
    interior(domain, x)?;
    if v.len() != domain.dim() {
        return Err(Error::Dimension { expected: domain.dim(), got: v.len() });
    }
    if !(v.amax() > S::zero()) {
        return Err(Error::ZeroVector);
    }
    let c = domain.chord(x, v)?;
    Ok((S::one() / (-c.t_minus) + S::one() / c.t_plus) / S::lit(2.0))
}

/// Lebesgue volume `α_d` of the Euclidean unit d-ball.
pub fn unit_ball_volume<S: Scalar>(d: usize) -> S {
    let pi = S::PI();
    let mut a = if d % 2 == 0 { S::one() } else { S::lit(2.0) };
    let mut k = if d % 2 == 0 { 2 } else { 3 };
    while k <= d {
        a = a * S::lit(2.0) * pi / S::from_usize(k).expect("dimension");
        k += 2;
    }
    a
}

/// Lebesgue volume of the Finsler unit ball with the discrepancy between the full and halved direction sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallVolume<S> {
    pub value: S,
    pub error: S,
}

/// Largest eigenvalue ratio of the second moment matrix accepted as round.
const ROUND_RATIO: f64 = 1.5;
const MAX_FRAME_STEPS: usize = 40;

/// Means of `r(u)^d` over the full and halved direction sets and the second moment matrix of the body
/// `A⁻¹B`, where `B` is the Finsler unit ball and `r(u) = 1/F(Au)` its radial function.
fn framed_moments<S: Scalar, D: ConvexDomain<S> + ?Sized>(
    domain: &D,
    x: &DVector<S>,
    dirs: &DirectionSet<S>,
    frame: &DMatrix<S>,
) -> Result<(S, S, DMatrix<S>)> {
    let d = domain.dim();
    let k = dirs.len();
    let half = k / 2;
    let mut sum_half = S::zero();
    let mut sum = S::zero();
    let mut second = DMatrix::zeros(d, d);
    let dn = i32::try_from(d).expect("dimension");
    for (i, u) in dirs.directions().iter().enumerate() {
        let c = domain.chord(x, &(frame * u))?;
        let f = (S::one() / (-c.t_minus) + S::one() / c.t_plus) / S::lit(2.0);
        let r = S::one() / f;
        let rd = r.powi(dn);
        sum += rd;
        second += u * u.transpose() * (rd * r * r);
        if i + 1 == half {
            sum_half = sum;
        }
    }
    let kf = S::from_usize(k).expect("count");
    let mean = sum / kf;
    let mean_half = if dirs.has_nested_half() { sum_half / S::from_usize(half).expect("count") } else { mean };
    Ok((mean, mean_half, second / kf))
}

/// Means of `ρ(u)^d` over the full and halved direction sets, `ρ` the radial function of the unit ball.
///
/// Elongated balls are first brought close to isotropic position by a linear frame fitted to their second
/// moments, so that thin spikes are resolved by the direction set.
fn radial_moments<S: Scalar, D: ConvexDomain<S> + ?Sized>(
    domain: &D,
    x: &DVector<S>,
    dirs: &DirectionSet<S>,
) -> Result<(S, S)> {
    let d = domain.dim();
    if dirs.dim() != d {
        return Err(Error::Dimension { expected: d, got: dirs.dim() });
    }
    let mut frame = DMatrix::identity(d, d);
    let mut jacobian = S::one();
    let mut best_ratio = S::infinity();
    for _ in 0..MAX_FRAME_STEPS {
        let (mean, mean_half, second) = framed_moments(domain, x, dirs, &frame)?;
        let done = (mean * jacobian, mean_half * jacobian);
        if !mean.is_finite_val() || d == 1 {
            return Ok(done);
        }
        let eig = second.symmetric_eigen();
        let lo = eig.eigenvalues.min();
        let hi = eig.eigenvalues.max();
        if !(lo > S::zero()) {
            return Ok(done);
        }
        let ratio = hi / lo;
        if ratio < S::lit(ROUND_RATIO) || !(ratio < best_ratio * S::lit(0.999)) {
            return Ok(done);
        }
        best_ratio = ratio;
        let root = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| l.sqrt()));
        let step = &eig.eigenvectors * root * eig.eigenvectors.transpose();
        let det = step.determinant().abs();
        let norm = det.powf(S::one() / S::from_usize(d).expect("dimension"));
        frame = frame * step / norm;
        jacobian = frame.determinant().abs();
    }
    let (mean, mean_half, _) = framed_moments(domain, x, dirs, &frame)?;
    Ok((mean * jacobian, mean_half * jacobian))
}

/// Lebesgue volume of the unit ball of the Finsler norm at `x`.
pub fn busemann_unit_ball_volume<S: Scalar, D: ConvexDomain<S> + ?Sized>(
    domain: &D,
    x: &DVector<S>,
    dirs: &DirectionSet<S>,
) -> Result<BallVolume<S>> {
    interior(domain, x)?;
    let (mean, mean_half) = radial_moments(domain, x, dirs)?;
    let alpha = unit_ball_volume::<S>(domain.dim());
    Ok(BallVolume {
        value: alpha * mean,
        error: alpha * (mean - mean_half).abs(),
    })
}

/// Busemann density `α_d / μ_L(B_x(1))` at `x`.
pub fn busemann_density<S: Scalar, D: ConvexDomain<S> + ?Sized>(domain: &D, x: &DVector<S>, dirs: &DirectionSet<S>) -> Result<S> {
    interior(domain, x)?;
    let (mean, _) = radial_moments(domain, x, dirs)?;
    Ok(S::one() / mean)
}

/// Outcome of comparing Hilbert distances of nested domains `Ω₁ ⊂ Ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub pairs: usize,
    /// Largest `d_{Ω₂} - d_{Ω₁}` seen, clamped at zero.
    pub max_violation: f64,
    pub violations: usize,
}

/// Checks `d_{Ω₂}(x, y) ≤ d_{Ω₁}(x, y) + tolerance` on sampled pairs of `Ω₁`.
pub fn metric_comparison_check<S, D1, D2>(
    inner: &D1,
    outer: &D2,
    pairs: &[(DVector<S>, DVector<S>)],
    tolerance: S,
) -> Result<ComparisonReport>
where
    S: Scalar,
    D1: ConvexDomain<S> + ?Sized,
    D2: ConvexDomain<S> + ?Sized,
{
    let mut report = ComparisonReport { pairs: pairs.len(), max_violation: 0.0, violations: 0 };
    for (x, y) in pairs {
        for z in [x, y] {
            interior(inner, z)?;
            if outer.membership(z) != Membership::Interior {
                return Err(Error::Containment);
            }
        }
        let d1 = hilbert_distance(inner, x, y)?;
        let d2 = hilbert_distance(outer, x, y)?;
        let excess = (d2 - d1).to_f64_lossy();
        if excess > report.max_violation {
            report.max_violation = excess;
        }
        if d2 > d1 + tolerance {
            report.violations += 1;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_distance() {
        let i = Ellipsoid::<f64>::interval(-1.0, 1.0);
        let d = hilbert_distance(&i, &DVector::from_element(1, 0.0), &DVector::from_element(1, 0.5)).unwrap();
        assert!((d - 0.5 * 3f64.ln()).abs() < 1e-14);
        assert!((d - 0.549306).abs() < 1e-6);
    }

    #[test]
    fn finsler_at_center_of_ball() {
        let b = Ellipsoid::<f64>::ball(3, 1.0);
        let x = DVector::zeros(3);
        let v = DVector::from_column_slice(&[0.0, 1.0, 0.0]);
        assert!((finsler_norm(&b, &x, &v).unwrap() - 1.0).abs() < 1e-14);
        assert!((finsler_norm(&b, &x, &(v.clone() * 2.0)).unwrap() - 2.0).abs() < 1e-14);
        assert_eq!(finsler_norm(&b, &x, &DVector::zeros(3)), Err(Error::ZeroVector));
    }

    #[test]
    fn unit_ball_constants() {
        assert!((unit_ball_volume::<f64>(1) - 2.0).abs() < 1e-15);
        assert!((unit_ball_volume::<f64>(2) - std::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume::<f64>(3) - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!((unit_ball_volume::<f64>(4) - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn non_interior_is_rejected() {
        let b = Ellipsoid::<f64>::ball(2, 1.0);
        let out = DVector::from_column_slice(&[2.0, 0.0]);
        assert_eq!(hilbert_distance(&b, &out, &DVector::zeros(2)), Err(Error::Domain));
    }
}
