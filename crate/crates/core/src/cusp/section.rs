//! Two-dimensional sections `ω_x` of `B^d` through a boundary point and the segment `s_∞`.

use nalgebra::DVector;

use super::bent::BentDomain;
use crate::error::{Error, Result};
use crate::hilbert::ConvexDomain;
use crate::projective::{Membership, ProjectivePoint};
use crate::scalar::Scalar;

/// Intersection of `B^d` with the projective plane spanned by a boundary point and `s_∞`.
///
/// The plane is `{v = v_0}` in the chart, so the section is the 2D bent domain `{x > ½|v_0|² - log y}` in the
/// coordinates `(x, y)`.
#[derive(Debug, Clone)]
pub struct PlaneSection<S: Scalar> {
    domain: BentDomain<S>,
    offset: DVector<S>,
}

impl<S: Scalar> PlaneSection<S> {
    pub fn domain(&self) -> &BentDomain<S> {
        &self.domain
    }

    /// Fixed transverse coordinates `v_0`.
    pub fn offset(&self) -> &DVector<S> {
        &self.offset
    }

    /// Chart point of `B^d` for section coordinates `(x, y)`.
    pub fn embed(&self, xy: &DVector<S>) -> DVector<S> {
        let mut z = DVector::zeros(self.offset.len() + 2);
        z[0] = xy[0];
        z[1] = xy[1];
        z.rows_mut(2, self.offset.len()).copy_from(&self.offset);
        z
    }

    /// Boundary curve `x = ½|v_0|² - log y` sampled at the given `y` values.
    pub fn boundary_curve(&self, ys: &[S]) -> Vec<(S, S)> {
        ys.iter().map(|&y| (self.domain.level() - y.ln(), y)).collect()
    }
}

/// Section `ω_x` for a boundary point `x ∈ ∂B^d \ s_∞`.
pub fn omega_x_section<S: Scalar>(d: usize, x: &ProjectivePoint<S>) -> Result<PlaneSection<S>> {
    let bent = BentDomain::new(d, S::zero())?;
    if x.len() != d + 1 {
        return Err(Error::Dimension { expected: d + 1, got: x.len() });
    }
    let z = match bent.patch().chart(x) {
        Some(z) => z,
        None => {
            return Err(match bent.classify_point(x) {
                Membership::Boundary => Error::DegenerateSection,
                _ => Error::Domain,
            })
        }
    };
    if bent.membership(&z) != Membership::Boundary {
        return Err(Error::Domain);
    }
    let offset = z.rows(2, d - 2).into_owned();
    let level = offset.norm_squared() / S::lit(2.0);
    Ok(PlaneSection {
        domain: BentDomain::new(2, level)?,
        offset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn section_through_unit_point() {
        let x = ProjectivePoint::from_slice(&[0.0_f64, 1.0, 0.0, 1.0]).unwrap();
        let s = omega_x_section(3, &x).unwrap();
        assert_eq!(s.domain().level(), 0.0);
        assert_eq!(s.domain().membership(&DVector::from_column_slice(&[0.1, 1.0])), Membership::Interior);
    }

    #[test]
    fn segment_points_are_degenerate() {
        let p = ProjectivePoint::from_slice(&[1.0_f64, 2.0, 0.0, 0.0]).unwrap();
        assert_eq!(omega_x_section(3, &p).unwrap_err(), Error::DegenerateSection);
        let interior = ProjectivePoint::from_slice(&[1.0_f64, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(omega_x_section(3, &interior).unwrap_err(), Error::Domain);
    }
}
