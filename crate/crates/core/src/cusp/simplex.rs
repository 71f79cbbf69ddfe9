//! Closed-form tangent lengths at deep points of `B^d` and the inscribed simplex of the Finsler unit ball.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::bent::BentDomain;
use crate::error::{Error, Result};
use crate::hilbert::{finsler_norm, ConvexDomain};
use crate::projective::Membership;
use crate::scalar::Scalar;

/// Base point `z_0 = (x_0, y_0, v_0)` of `B^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeepPoint<S: Scalar> {
    pub x0: S,
    pub y0: S,
    pub v0: DVector<S>,
}

impl<S: Scalar> DeepPoint<S> {
    pub fn new(x0: S, y0: S, v0: DVector<S>) -> Self {
        Self { x0, y0, v0 }
    }

    pub fn dim(&self) -> usize {
        self.v0.len() + 2
    }

    pub fn chart(&self) -> DVector<S> {
        let mut z = DVector::zeros(self.dim());
        z[0] = self.x0;
        z[1] = self.y0;
        z.rows_mut(2, self.v0.len()).copy_from(&self.v0);
        z
    }

    /// Height `x_0 + log y_0 - ½|v_0|²` above `∂B^d`.
    fn height(&self) -> S {
        self.x0 + self.y0.ln() - self.v0.norm_squared() / S::lit(2.0)
    }
}

/// `‖w_1‖ = x_0 / (2x_0 - |v_0|² + 2 log y_0)` for `w_1 = (x_0, 0, 0)`.
pub fn length_w1<S: Scalar>(z: &DeepPoint<S>) -> S {
    z.x0 / (S::lit(2.0) * z.height())
}

/// `‖w_2‖ = ε / (2(y_0 - exp(½|v_0|² - x_0)))` for `w_2 = (0, ε, 0)`.
pub fn length_w2<S: Scalar>(z: &DeepPoint<S>, eps: S) -> S {
    eps / (S::lit(2.0) * (z.y0 - (z.v0.norm_squared() / S::lit(2.0) - z.x0).exp()))
}

/// `‖w_3‖ = √(2(x_0² + x_0 log y_0)) / (2(x_0 + log y_0) - |v_0|²)` for `w_3` along `v_0`.
pub fn length_w3<S: Scalar>(z: &DeepPoint<S>) -> S {
    let two = S::lit(2.0);
    (two * (z.x0 * z.x0 + z.x0 * z.y0.ln())).sqrt() / (two * (z.x0 + z.y0.ln()) - z.v0.norm_squared())
}

/// `‖w_i‖ = √x_0 / √(2(x_0 + log y_0 - ½|v_0|²))` for `w_i ⊥ v_0`, `i ≥ 4`.
pub fn length_w_perp<S: Scalar>(z: &DeepPoint<S>) -> S {
    z.x0.sqrt() / (S::lit(2.0) * z.height()).sqrt()
}

/// Orthonormal basis of `R^{d-2}` whose first vector is `v_0/|v_0|` (or `e_1` when `v_0 = 0`).
fn adapted_basis<S: Scalar>(v0: &DVector<S>) -> Vec<DVector<S>> {
    let m = v0.len();
    let mut out: Vec<DVector<S>> = Vec::with_capacity(m);
    if m == 0 {
        return out;
    }
    let first = if v0.norm() > S::zero() {
        v0.normalize()
    } else {
        DVector::from_fn(m, |i, _| if i == 0 { S::one() } else { S::zero() })
    };
    out.push(first);
    for k in 0..m {
        if out.len() == m {
            break;
        }
        let mut e = DVector::from_fn(m, |i, _| if i == k { S::one() } else { S::zero() });
        for b in &out {
            let p = b.dot(&e);
            e -= b * p;
        }
        let n = e.norm();
        if n > S::lit(1e-8) {
            out.push(e / n);
        }
    }
    out
}

/// The simplex `{0, w_1, ..., w_d}` in the tangent space at `z_0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CuspSimplex<S: Scalar> {
    pub vertices: Vec<DVector<S>>,
    /// Closed-form Finsler lengths of the `w_i`.
    pub formula_lengths: Vec<S>,
    /// Finsler lengths from the chord oracle.
    pub oracle_lengths: Vec<S>,
    /// Lebesgue volume `ε x_0^{d/2} / d!`.
    pub volume: S,
}

/// Tangent vectors `w_1, ..., w_d` with their closed-form lengths.
pub fn simplex_vectors<S: Scalar>(z: &DeepPoint<S>, eps: S) -> (Vec<DVector<S>>, Vec<S>) {
    let d = z.dim();
    let mut vecs = Vec::with_capacity(d);
    let mut lens = Vec::with_capacity(d);
    let mut w1 = DVector::zeros(d);
    w1[0] = z.x0;
    vecs.push(w1);
    lens.push(length_w1(z));
    let mut w2 = DVector::zeros(d);
    w2[1] = eps;
    vecs.push(w2);
    lens.push(length_w2(z, eps));
    let scale = z.x0.sqrt();
    for (i, e) in adapted_basis(&z.v0).into_iter().enumerate() {
        let mut w = DVector::zeros(d);
        w.rows_mut(2, d - 2).copy_from(&(e * scale));
        vecs.push(w);
        lens.push(if i == 0 { length_w3(z) } else { length_w_perp(z) });
    }
    (vecs, lens)
}

fn factorial<S: Scalar>(d: usize) -> S {
    (1..=d).fold(S::one(), |a, k| a * S::from_usize(k).expect("small"))
}

/// Simplex inscribed in the Finsler unit ball at `z_0`; fails with `NotYetDeep` unless every `‖w_i‖ < 1`.
pub fn cusp_simplex<S: Scalar>(z: &DeepPoint<S>, eps: S) -> Result<CuspSimplex<S>> {
    let d = z.dim();
    let domain = BentDomain::new(d, S::zero())?;
    let zc = z.chart();
    if domain.membership(&zc) != Membership::Interior {
        return Err(Error::Domain);
    }
    let (vertices, formula_lengths) = simplex_vectors(z, eps);
    let mut oracle_lengths = Vec::with_capacity(d);
    for (w, &f) in vertices.iter().zip(&formula_lengths) {
        let o = finsler_norm(&domain, &zc, w)?;
        if !(o < S::one()) || !(f < S::one()) {
            return Err(Error::NotYetDeep { x0: z.x0.to_f64_lossy(), norm: o.max(f).to_f64_lossy() });
        }
        oracle_lengths.push(o);
    }
    let m = DMatrix::from_columns(&vertices);
    let volume = m.determinant().abs() / factorial::<S>(d);
    Ok(CuspSimplex { vertices, formula_lengths, oracle_lengths, volume })
}

/// Closed form `ε x_0^{d/2} / d!` of the simplex volume.
pub fn simplex_volume_formula<S: Scalar>(d: usize, x0: S, eps: S) -> S {
    eps * x0.powf(S::from_usize(d).expect("small") / S::lit(2.0)) / factorial::<S>(d)
}

/// Threshold search result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepthThreshold {
    pub x0: f64,
    pub max_length: f64,
}

/// Smallest `x_0` on the grid `2^{k/8}` for which the simplex at `(x_0, y_0, v_0)` fits in the unit ball.
pub fn depth_threshold<S: Scalar>(y0: S, v0: &DVector<S>, eps: S) -> Result<DepthThreshold> {
    let floor = v0.norm_squared() / S::lit(2.0) - y0.ln();
    for k in -80..400 {
        let x0 = S::lit(2f64.powf(k as f64 / 8.0));
        if x0 <= floor {
            continue;
        }
        let z = DeepPoint::new(x0, y0, v0.clone());
        if let Ok(s) = cusp_simplex(&z, eps) {
            let max_length = s.oracle_lengths.iter().fold(S::zero(), |a, &b| a.max(b));
            return Ok(DepthThreshold { x0: x0.to_f64_lossy(), max_length: max_length.to_f64_lossy() });
        }
    }
    Err(Error::NotYetDeep { x0: f64::INFINITY, norm: 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin(x0: f64) -> DeepPoint<f64> {
        DeepPoint::new(x0, 1.0, DVector::zeros(2))
    }

    #[test]
    fn length_examples() {
        let z = origin(100.0);
        assert!((length_w1(&z) - 0.5).abs() < 1e-15);
        assert!((length_w2(&z, 0.1) - 0.05).abs() < 1e-12);
        assert!((length_w_perp(&z) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn shallow_point_is_rejected() {
        let z = DeepPoint::new(0.3, 1.0, DVector::from_column_slice(&[0.5, 0.0]));
        assert!(matches!(cusp_simplex(&z, 0.1), Err(Error::NotYetDeep { .. })));
    }

    #[test]
    fn simplex_volume_matches_formula() {
        let z = DeepPoint::new(60.0_f64, 2.0, DVector::from_column_slice(&[0.3, -0.4]));
        let s = cusp_simplex(&z, 0.05).unwrap();
        assert!((s.volume - simplex_volume_formula(4, 60.0, 0.05)).abs() < 1e-9 * s.volume);
    }
}
