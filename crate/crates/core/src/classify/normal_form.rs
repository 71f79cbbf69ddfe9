//! Pencil action and normal-form conjugation of peripheral elements centralizing `P⁰_{d-1}`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cusp::{BentGroupElement, DegenerateGroupElement};
use crate::error::{Error, Result};
use crate::hyperbolic::{commutator, parabolic_matrix};
use crate::projective::ProjectiveMap;
use crate::scalar::Scalar;

/// Cusp type decided by the peripheral holonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CuspKind {
    #[serde(rename = "standard")]
    Standard,
    #[serde(rename = "bent")]
    Bent,
    #[serde(rename = "degenerate-p")]
    DegenerateP,
    #[serde(rename = "degenerate-b")]
    DegenerateB,
}

impl CuspKind {
    pub fn is_degenerate(self) -> bool {
        matches!(self, Self::DegenerateP | Self::DegenerateB)
    }
}

/// Action `[β δ; 0 1]` on the pencil of hyperplanes invariant under `P⁰_{d-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilAction<S: Scalar> {
    pub beta: S,
    pub delta: S,
}

impl<S: Scalar> PencilAction<S> {
    pub fn matrix(&self) -> [[S; 2]; 2] {
        [[self.beta, self.delta], [S::zero(), S::one()]]
    }

    /// `b = log β`.
    pub fn log_beta(&self) -> S {
        self.beta.ln()
    }
}

/// Entries `(α, β, δ, v, z)` of an element of the centralizer of `P⁰_{d-1}`:
/// `(1, α, vᵀ, z / 0, β, 0, δ / 0, 0, I, v / 0, 0, 0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerEntries<S: Scalar> {
    pub alpha: S,
    pub beta: S,
    pub delta: S,
    pub v: Vec<S>,
    pub z: S,
}

fn shape_tol<S: Scalar>() -> S {
    S::residual_tol()
}

/// Reads the centralizer entries after scaling the `(1,1)` entry to one.
pub fn centralizer_entries<S: Scalar>(gamma: &DMatrix<S>) -> Result<CentralizerEntries<S>> {
    let n = gamma.nrows();
    let d = n - 1;
    if n < 3 || gamma.ncols() != n {
        return Err(Error::Dimension { expected: n, got: gamma.ncols() });
    }
    let lead = gamma[(0, 0)];
    if !(lead.abs() > shape_tol::<S>() * gamma.amax()) {
        return Err(Error::NotInCentralizer { residual: f64::INFINITY });
    }
    let m = gamma / lead;
    let scale = S::one() + m.amax();
    let mut residual = S::zero();
    let mut dev = |x: S| residual = residual.max(x.abs());
    for j in 0..n {
        dev(m[(d, j)] - if j == d { S::one() } else { S::zero() });
        if j != 1 {
            dev(m[(1, j)] * if j == d { S::zero() } else { S::one() });
        }
    }
    dev(m[(1, 0)]);
    for i in 2..d {
        dev(m[(i, 0)]);
        dev(m[(i, 1)]);
        for j in 2..d {
            dev(m[(i, j)] - if i == j { S::one() } else { S::zero() });
        }
        dev(m[(0, i)] - m[(i, d)]);
    }
    if residual > shape_tol::<S>() * scale {
        return Err(Error::NotInCentralizer { residual: residual.to_f64_lossy() });
    }
    Ok(CentralizerEntries {
        alpha: m[(0, 1)],
        beta: m[(1, 1)],
        delta: m[(1, d)],
        v: (2..d).map(|i| m[(0, i)]).collect(),
        z: m[(0, d)],
    })
}

/// Extracts `(β, δ)`; fails unless `γ` has the centralizer shape and `β > 0`.
pub fn pencil_action<S: Scalar>(gamma: &ProjectiveMap<S>) -> Result<PencilAction<S>> {
    let e = centralizer_entries(gamma.matrix())?;
    if !(e.beta > S::zero()) {
        return Err(Error::Orientation { beta: e.beta.to_f64_lossy() });
    }
    Ok(PencilAction { beta: e.beta, delta: e.delta })
}

/// Normal form `C γ C⁻¹` with the conjugator `C`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalForm<S: Scalar> {
    pub kind: CuspKind,
    pub pencil: PencilAction<S>,
    pub conjugator: DMatrix<S>,
    pub normal: DMatrix<S>,
    /// Parameters of the normal form: `(α', v)` in `P_d` or `P'_d`, `(b, v)` in `B_d` or `B'_d`.
    pub params: Vec<S>,
}

/// Conjugator `I + (e-1)E_{22} + f E_{2,d+1}` of the parabolic branch.
fn central_conjugator<S: Scalar>(n: usize, e: S, f: S) -> DMatrix<S> {
    let mut c = DMatrix::identity(n, n);
    c[(1, 1)] = e;
    c[(1, n - 1)] = f;
    c
}

/// Conjugator `[[e², f, 0, 0], [0, 1, 0, g], [0, 0, eI, 0], [0, 0, 0, 1]]` of the hyperbolic branch.
fn normalizer_conjugator<S: Scalar>(n: usize, e: S, f: S, g: S) -> DMatrix<S> {
    let mut c = DMatrix::identity(n, n);
    c[(0, 0)] = e * e;
    c[(0, 1)] = f;
    c[(1, n - 1)] = g;
    for i in 2..n - 1 {
        c[(i, i)] = e;
    }
    c
}

fn conjugate<S: Scalar>(c: &DMatrix<S>, g: &DMatrix<S>) -> DMatrix<S> {
    let ci = c.clone().try_inverse().expect("conjugators are invertible");
    let m = c * g * ci;
    let lead = m[(0, 0)];
    m / lead
}

/// Conjugates `γ` into `P_d`, `P'_d`, `B_d` or `B'_d` using the closed-form conjugator families.
///
/// `beta_tol` is the relative tolerance for deciding `β = 1`.
pub fn normal_form<S: Scalar>(gamma: &ProjectiveMap<S>, beta_tol: S) -> Result<NormalForm<S>> {
    let n = gamma.size();
    let d = n - 1;
    let e = centralizer_entries(gamma.matrix())?;
    if !(e.beta > S::zero()) {
        return Err(Error::Orientation { beta: e.beta.to_f64_lossy() });
    }
    let pencil = PencilAction { beta: e.beta, delta: e.delta };
    let scale = S::one() + gamma.matrix().amax() / gamma.matrix()[(0, 0)].abs();
    let two = S::lit(2.0);
    let v2 = e.v.iter().fold(S::zero(), |a, &x| a + x * x);
    let check = |normal: &DMatrix<S>, target: &DMatrix<S>| -> Result<()> {
        let r = (normal - target).amax();
        if r > S::residual_tol() * scale * scale {
            Err(Error::NormalFormFailure(format!("conjugated element misses the model shape by {:e}", r.to_f64_lossy())))
        } else {
            Ok(())
        }
    };
    if (e.beta - S::one()).abs() <= beta_tol {
        let ad = e.alpha * e.delta;
        if ad.abs() <= S::residual_tol() * scale {
            return Err(Error::NormalFormFailure("parabolic element acts trivially on the pencil (α δ = 0)".into()));
        }
        let kind = if ad > S::zero() { CuspKind::Standard } else { CuspKind::DegenerateP };
        let sign = if ad > S::zero() { S::one() } else { -S::one() };
        let ee = (e.alpha / e.delta).abs().sqrt();
        let alpha_n = e.alpha / ee;
        let z_target = (v2 + sign * alpha_n * alpha_n) / two;
        let f = ee * (e.z - z_target) / e.alpha;
        let conjugator = central_conjugator(n, ee, f);
        let normal = conjugate(&conjugator, gamma.matrix());
        let mut params = vec![alpha_n];
        params.extend(e.v.iter().copied());
        let target = match kind {
            CuspKind::Standard => parabolic_matrix(d, &params)?,
            _ => DegenerateGroupElement::PPrime { a: alpha_n, u: e.v.clone() }.matrix(),
        };
        check(&normal, &target)?;
        return Ok(NormalForm { kind, pencil, conjugator, normal, params });
    }
    let b = e.beta.ln();
    let one_minus = S::one() - e.beta;
    let zeta = e.z + e.alpha * e.delta / one_minus - v2 / two;
    if zeta.abs() <= S::residual_tol() * scale {
        return Err(Error::NormalFormFailure("hyperbolic element has a degenerate translation part (Z = 0)".into()));
    }
    let kind = if zeta * b < S::zero() { CuspKind::Bent } else { CuspKind::DegenerateB };
    let e2 = (b / zeta).abs();
    let ee = e2.sqrt();
    let f = -e2 * e.alpha / (e.beta - S::one());
    let g = -e.delta / one_minus;
    let conjugator = normalizer_conjugator(n, ee, f, g);
    let normal = conjugate(&conjugator, gamma.matrix());
    let v_n: Vec<S> = e.v.iter().map(|x| *x * ee).collect();
    let target = match kind {
        CuspKind::Bent => BentGroupElement::new(b, v_n.clone()).matrix(),
        _ => DegenerateGroupElement::BPrime { t: b, u: v_n.clone() }.matrix(),
    };
    check(&normal, &target)?;
    let mut params = vec![b];
    params.extend(v_n);
    Ok(NormalForm { kind, pencil, conjugator, normal, params })
}

/// Largest relative commutator of `γ` with the wall translations.
pub fn centralizes<S: Scalar>(gamma: &ProjectiveMap<S>, delta: &[ProjectiveMap<S>]) -> S {
    delta
        .iter()
        .map(|g| commutator(gamma.matrix(), g.matrix()).amax() / (gamma.matrix().amax() * g.matrix().amax()))
        .fold(S::zero(), |a, b| a.max(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::{bending_matrix, make_parabolic};

    #[test]
    fn pencil_examples() {
        let p = make_parabolic(3, &[0.4_f64, 1.0]).unwrap();
        assert!((pencil_action(&p).unwrap().beta - 1.0).abs() < 1e-15);
        let b = BentGroupElement::new(0.3_f64, vec![0.0]).map();
        assert!((pencil_action(&b).unwrap().beta - 0.3f64.exp()).abs() < 1e-14);
        let g = ProjectiveMap::new(bending_matrix(3, 0.2_f64) * parabolic_matrix(3, &[1.0, 0.5]).unwrap()).unwrap();
        assert!((pencil_action(&g).unwrap().beta - (0.8f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn bent_path_element_is_bent() {
        for t in [-0.7, -0.1, 0.3, 1.0] {
            let g = ProjectiveMap::new(bending_matrix(3, t) * parabolic_matrix(3, &[1.0_f64, 0.3]).unwrap()).unwrap();
            let nf = normal_form(&g, 1e-7).unwrap();
            assert_eq!(nf.kind, CuspKind::Bent, "t = {t}");
        }
    }

    #[test]
    fn shape_and_orientation_errors() {
        let bad = ProjectiveMap::new(DMatrix::from_fn(4, 4, |i, j| if i == j { 1.0 } else if i == 3 && j == 0 { 0.5 } else { 0.0 })).unwrap();
        assert!(matches!(pencil_action(&bad), Err(Error::NotInCentralizer { .. })));
        let mut m = DMatrix::<f64>::identity(4, 4);
        m[(1, 1)] = -2.0;
        assert!(matches!(pencil_action(&ProjectiveMap::new(m).unwrap()), Err(Error::Orientation { .. })));
    }
}
