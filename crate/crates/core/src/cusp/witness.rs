//! Divergent orbit sequences showing that lattices of `P'_d` and `B'_d` preserve no properly convex set.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::groups::{DegenerateGroupElement, DegenerateVariant};
use crate::error::{Error, Result};
use crate::projective::SpherePoint;
use crate::scalar::Scalar;

/// One term of a witness sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessTerm {
    pub n: u32,
    /// Lattice element parameters `(a, u)` or `(t, u)`.
    pub params: Vec<f64>,
    /// Sphere-lift orbit point of `e_{d+1}`.
    pub orbit_point: Vec<f64>,
    /// Distance from the expected limit `±e_1`.
    pub residual: f64,
}

/// The two sequences `α_n → [e_1]` and `β_n → [-e_1]` in the sphere lift.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineLineWitness {
    pub variant: DegenerateVariant,
    pub dimension: usize,
    pub towards_plus: Vec<WitnessTerm>,
    pub towards_minus: Vec<WitnessTerm>,
    pub final_residual: f64,
}

impl AffineLineWitness {
    pub fn certified(&self, tolerance: f64) -> bool {
        self.final_residual < tolerance
    }
}

/// Builds the witness sequences for the lattice spanned by the columns of `basis` (size `(d-1) × (d-1)`).
///
/// Term `n` uses the lattice point nearest a target at distance `2^n` along the translation axis, respectively
/// along the `a` axis (`P'_d`) or the negative `t` axis (`B'_d`).
pub fn degenerate_affine_line_witness<S: Scalar>(
    variant: DegenerateVariant,
    basis: &DMatrix<S>,
    terms: u32,
) -> Result<AffineLineWitness> {
    let m = basis.nrows();
    if basis.ncols() != m || m < 1 {
        return Err(Error::Dimension { expected: m, got: basis.ncols() });
    }
    let d = m + 1;
    if d < 3 {
        return Err(Error::Dimension { expected: 3, got: d });
    }
    let svd = basis.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > smax * S::lit(1e-10)) {
        return Err(Error::Lattice);
    }
    let inv = basis.clone().try_inverse().ok_or(Error::Lattice)?;
    let nearest = |target: &DVector<S>| -> DVector<S> {
        let coeffs = (&inv * target).map(|c| c.round());
        basis * coeffs
    };
    let base = DVector::from_fn(d + 1, |i, _| if i == d { S::one() } else { S::zero() });
    let e1 = SpherePoint::new(DVector::from_fn(d + 1, |i, _| if i == 0 { S::one() } else { S::zero() })).expect("unit");
    let sequence = |axis: usize, sign: S, limit: &SpherePoint<S>| -> Vec<WitnessTerm> {
        (1..=terms)
            .map(|n| {
                let r = S::lit(2f64.powi(n as i32)) * sign;
                let target = DVector::from_fn(m, |i, _| if i == axis { r } else { S::zero() });
                let p = nearest(&target);
                let g = DegenerateGroupElement::from_params(variant, p.as_slice());
                let image = SpherePoint::new(g.matrix() * &base).expect("invertible");
                WitnessTerm {
                    n,
                    params: p.iter().map(|x| x.to_f64_lossy()).collect(),
                    orbit_point: image.coords().iter().map(|x| x.to_f64_lossy()).collect(),
                    residual: image.distance(limit).to_f64_lossy(),
                }
            })
            .collect()
    };
    let minus_sign = match variant {
        DegenerateVariant::PPrime => S::one(),
        DegenerateVariant::BPrime => -S::one(),
    };
    let towards_plus = sequence(1, S::one(), &e1);
    let towards_minus = sequence(0, minus_sign, &e1.antipode());
    let final_residual = towards_plus
        .last()
        .map_or(f64::INFINITY, |t| t.residual)
        .max(towards_minus.last().map_or(f64::INFINITY, |t| t.residual));
    Ok(AffineLineWitness { variant, dimension: d, towards_plus, towards_minus, final_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_prime_witness_converges() {
        let w = degenerate_affine_line_witness(DegenerateVariant::PPrime, &DMatrix::<f64>::identity(2, 2), 40).unwrap();
        assert!(w.certified(1e-6), "{}", w.final_residual);
        assert!(w.towards_plus.last().unwrap().orbit_point[0] > 0.99);
        assert!(w.towards_minus.last().unwrap().orbit_point[0] < -0.99);
    }

    #[test]
    fn singular_basis_is_rejected() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0_f64, 2.0, 2.0, 4.0]);
        assert_eq!(degenerate_affine_line_witness(DegenerateVariant::BPrime, &b, 10).unwrap_err(), Error::Lattice);
    }
}
