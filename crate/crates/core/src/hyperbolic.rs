//! Paraboloid model of H^d: the form Q_d, parabolic translations, the bending path c_t and centralizer checks.
//!
//! Coordinates are `x_1, ..., x_{d+1}`, stored at indices `0..=d`. The point at infinity is `[e_1]` and the
//! wall hyperplane is `{x_2 = 0}`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::projective::{Membership, ProjectiveHyperplane, ProjectiveMap, ProjectivePoint};
use crate::scalar::{tol, Scalar};

/// A quadratic form on R^{d+1} given by its Gram matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm<S: Scalar> {
    gram: DMatrix<S>,
}

impl<S: Scalar> QuadraticForm<S> {
    /// `Q_d = x_2^2 + ... + x_d^2 - 2 x_1 x_{d+1}`, signature (d, 1).
    pub fn standard(d: usize) -> Self {
        let n = d + 1;
        let mut gram = DMatrix::zeros(n, n);
        for i in 1..d {
            gram[(i, i)] = S::one();
        }
        gram[(0, d)] = -S::one();
        gram[(d, 0)] = -S::one();
        Self { gram }
    }

    /// `Q'_d = -x_2^2 + x_3^2 + ... + x_d^2 - 2 x_1 x_{d+1}`, preserved by `P'_d`.
    pub fn degenerate_parabolic(d: usize) -> Self {
        let mut q = Self::standard(d);
        q.gram[(1, 1)] = -S::one();
        q
    }

    pub fn gram(&self) -> &DMatrix<S> {
        &self.gram
    }

    pub fn eval(&self, x: &DVector<S>) -> S {
        x.dot(&(&self.gram * x))
    }

    pub fn bilinear(&self, x: &DVector<S>, y: &DVector<S>) -> S {
        x.dot(&(&self.gram * y))
    }

    /// Counts of positive, negative and zero eigenvalues of the Gram matrix.
    pub fn signature(&self) -> (usize, usize, usize) {
        let eig = self.gram.clone().symmetric_eigen();
        let t = tol::<S>();
        eig.eigenvalues.iter().fold((0, 0, 0), |(p, m, z), &e| {
            if e > t {
                (p + 1, m, z)
            } else if e < -t {
                (p, m + 1, z)
            } else {
                (p, m, z + 1)
            }
        })
    }

    /// Max-norm of `GᵀJG - J`.
    pub fn preservation_residual(&self, g: &DMatrix<S>) -> S {
        (g.transpose() * &self.gram * g - &self.gram).amax()
    }
}

/// Classifies a point against the paraboloid model `{Q_d < 0}`.
pub fn hyperboloid_membership<S: Scalar>(x: &ProjectivePoint<S>) -> Membership {
    let d = x.len() - 1;
    let q = QuadraticForm::standard(d).eval(x.coords());
    if q.abs() <= tol::<S>() {
        Membership::Boundary
    } else if q < S::zero() {
        Membership::Interior
    } else {
        Membership::Exterior
    }
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}

/// Matrix of the parabolic translation with translation vector `v ∈ R^{d-1}`.
pub fn parabolic_matrix<S: Scalar>(d: usize, v: &[S]) -> Result<DMatrix<S>> {
    check_len(d - 1, v.len())?;
    let n = d + 1;
    let mut m = DMatrix::identity(n, n);
    let mut sq = S::zero();
    for (i, &vi) in v.iter().enumerate() {
        m[(0, i + 1)] = vi;
        m[(i + 1, d)] = vi;
        sq += vi * vi;
    }
    m[(0, d)] = sq / S::lit(2.0);
    Ok(m)
}

pub fn make_parabolic<S: Scalar>(d: usize, v: &[S]) -> Result<ProjectiveMap<S>> {
    Ok(ProjectiveMap::from_normalized(parabolic_matrix(d, v)?))
}

/// Nilpotent element of the Lie algebra of `P_d` with data `u`.
pub fn parabolic_algebra_element<S: Scalar>(d: usize, u: &[S]) -> Result<DMatrix<S>> {
    check_len(d - 1, u.len())?;
    let n = d + 1;
    let mut m = DMatrix::zeros(n, n);
    for (i, &ui) in u.iter().enumerate() {
        m[(0, i + 1)] = ui;
        m[(i + 1, d)] = ui;
    }
    Ok(m)
}

/// `exp(N) = I + N + N²/2` for `N³ = 0`.
pub fn exp_nilpotent<S: Scalar>(nil: &DMatrix<S>) -> DMatrix<S> {
    let n = nil.nrows();
    let mut sq = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = S::zero();
            for k in 0..n {
                acc += nil[(i, k)] * nil[(k, j)];
            }
            sq[(i, j)] = acc;
        }
    }
    DMatrix::identity(n, n) + nil + sq / S::lit(2.0)
}

/// Infinitesimal generator `C = diag(-1, d, -1, ..., -1)` of the bending path.
pub fn bending_generator<S: Scalar>(d: usize) -> DMatrix<S> {
    let mut c = DMatrix::from_diagonal_element(d + 1, d + 1, -S::one());
    c[(1, 1)] = S::from_usize(d).expect("dimension");
    c
}

/// `c_t = exp(tC) = diag(e^{-t}, e^{dt}, e^{-t}, ..., e^{-t})`.
pub fn bending_element<S: Scalar>(d: usize, t: S) -> ProjectiveMap<S> {
    ProjectiveMap::from_normalized(bending_matrix(d, t))
}

pub fn bending_matrix<S: Scalar>(d: usize, t: S) -> DMatrix<S> {
    let mut c = DMatrix::from_diagonal_element(d + 1, d + 1, (-t).exp());
    c[(1, 1)] = (S::from_usize(d).expect("dimension") * t).exp();
    c
}

pub fn commutator<S: Scalar>(a: &DMatrix<S>, b: &DMatrix<S>) -> DMatrix<S> {
    a * b - b * a
}

/// The wall hyperplane `{x_2 = 0}` fixed pointwise (projectively) by `c_t`.
pub fn wall<S: Scalar>(d: usize) -> ProjectiveHyperplane<S> {
    ProjectiveHyperplane::coordinate(d + 1, 1)
}

/// Generators of `PSO(Q_d; d-1, 1)`, the stabilizer of both sides of the wall.
///
/// The list holds the translations of `P⁰_{d-1}`, the dilation `diag(λ, 1, ..., 1, 1/λ)`, rotations of the
/// `x_3 .. x_d` block and an involution exchanging `e_1` and `e_{d+1}`.
pub fn wall_stabilizer_generators<S: Scalar>(d: usize, lambda: S, angle: S) -> Vec<ProjectiveMap<S>> {
    let n = d + 1;
    let mut out = wall_translation_generators(d);
    let mut dil = DMatrix::identity(n, n);
    dil[(0, 0)] = lambda;
    dil[(d, d)] = S::one() / lambda;
    out.push(ProjectiveMap::from_normalized(dil));
    for i in 2..d.saturating_sub(1) {
        let mut rot = DMatrix::identity(n, n);
        let (s, c) = angle.sin_cos();
        rot[(i, i)] = c;
        rot[(i, i + 1)] = -s;
        rot[(i + 1, i)] = s;
        rot[(i + 1, i + 1)] = c;
        out.push(ProjectiveMap::from_normalized(rot));
    }
    let mut swap = DMatrix::identity(n, n);
    swap[(0, 0)] = S::zero();
    swap[(d, d)] = S::zero();
    swap[(0, d)] = S::one();
    swap[(d, 0)] = S::one();
    if d >= 3 {
        swap[(2, 2)] = -S::one();
    } else {
        swap.neg_mut();
    }
    out.push(ProjectiveMap::from_normalized(swap));
    out
}

/// Basis translations `make_parabolic(e_i)` of `P_d`.
pub fn parabolic_generators<S: Scalar>(d: usize) -> Vec<ProjectiveMap<S>> {
    (0..d - 1).map(|i| basis_translation(d, i)).collect()
}

/// Basis translations of `P⁰_{d-1}`, the translations parallel to the wall.
pub fn wall_translation_generators<S: Scalar>(d: usize) -> Vec<ProjectiveMap<S>> {
    (1..d - 1).map(|i| basis_translation(d, i)).collect()
}

fn basis_translation<S: Scalar>(d: usize, i: usize) -> ProjectiveMap<S> {
    let mut v = vec![S::zero(); d - 1];
    v[i] = S::one();
    make_parabolic(d, &v).expect("length d-1")
}

/// Group whose centralizer is tested.
#[derive(Debug, Clone)]
pub enum CentralizerOf<S: Scalar> {
    /// A caller-supplied generating set of `PSO(Q_d; d-1, 1)`.
    WallStabilizer(Vec<ProjectiveMap<S>>),
    /// The parabolic group `P_d`.
    Parabolic,
    /// The wall translations `P⁰_{d-1}`.
    WallParabolic,
}

/// Generator with a nonzero commutator.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorWitness<S: Scalar> {
    pub generator: DMatrix<S>,
    pub commutator: DMatrix<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralizerCheck<S: Scalar> {
    pub member: bool,
    pub max_residual: S,
    pub witness: Option<CommutatorWitness<S>>,
}

/// Tests whether `b` commutes with every generator of the chosen group.
pub fn centralizer_membership<S: Scalar>(b: &ProjectiveMap<S>, which: &CentralizerOf<S>) -> CentralizerCheck<S> {
    let d = b.size() - 1;
    let gens = match which {
        CentralizerOf::WallStabilizer(g) => g.clone(),
        CentralizerOf::Parabolic => parabolic_generators(d),
        CentralizerOf::WallParabolic => wall_translation_generators(d),
    };
    let bm = b.matrix();
    let threshold = tol::<S>() * (S::one() + bm.amax());
    let mut max_residual = S::zero();
    let mut witness = None;
    for g in &gens {
        let c = commutator(bm, g.matrix());
        let r = c.amax();
        if r > max_residual {
            max_residual = r;
        }
        if r > threshold && witness.is_none() {
            witness = Some(CommutatorWitness {
                generator: g.matrix().clone(),
                commutator: c,
            });
        }
    }
    CentralizerCheck {
        member: witness.is_none(),
        max_residual,
        witness,
    }
}

/// Matrix `(1, uᵀ, b / 0, I, w / 0, 0, 1)`; it centralizes `P_d` exactly when `u = w`.
pub fn parabolic_centralizer_candidate<S: Scalar>(u: &[S], w: &[S], b: S) -> Result<DMatrix<S>> {
    check_len(u.len(), w.len())?;
    let d = u.len() + 1;
    let mut m = DMatrix::identity(d + 1, d + 1);
    for i in 0..u.len() {
        m[(0, i + 1)] = u[i];
        m[(i + 1, d)] = w[i];
    }
    m[(0, d)] = b;
    Ok(m)
}

/// Hyperbolic distance of interior points of the paraboloid model.
pub fn hyperbolic_distance_q<S: Scalar>(x: &ProjectivePoint<S>, y: &ProjectivePoint<S>) -> Result<S> {
    check_len(x.len(), y.len())?;
    let d = x.len() - 1;
    let q = QuadraticForm::standard(d);
    let (qx, qy) = (q.eval(x.coords()), q.eval(y.coords()));
    if hyperboloid_membership(x) != Membership::Interior || hyperboloid_membership(y) != Membership::Interior {
        return Err(Error::Domain);
    }
    let xs = x.coords() / (-qx).sqrt();
    let mut ys = y.coords() / (-qy).sqrt();
    if q.bilinear(&xs, &ys) > S::zero() {
        ys.neg_mut();
    }
    let diff = xs - ys;
    let chord = q.eval(&diff).max(S::zero());
    Ok(S::lit(2.0) * (chord.sqrt() / S::lit(2.0)).asinh())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(c: &[f64]) -> ProjectivePoint<f64> {
        ProjectivePoint::from_slice(c).unwrap()
    }

    #[test]
    fn membership_examples() {
        assert_eq!(hyperboloid_membership(&pt(&[1.0, 0.0, 0.0, 0.0])), Membership::Boundary);
        assert_eq!(hyperboloid_membership(&pt(&[1.0, 0.0, 0.0, 1.0])), Membership::Interior);
        assert_eq!(hyperboloid_membership(&pt(&[0.5, 1.0, 0.0, 1.0])), Membership::Boundary);
        assert_eq!(hyperboloid_membership(&pt(&[0.0, 1.0, 0.0, 1.0])), Membership::Exterior);
    }

    #[test]
    fn signature_is_d_1() {
        for d in 2..7 {
            assert_eq!(QuadraticForm::<f64>::standard(d).signature(), (d, 1, 0));
        }
    }

    #[test]
    fn parabolic_examples() {
        assert_eq!(parabolic_matrix::<f64>(3, &[0.0, 0.0]).unwrap(), DMatrix::identity(4, 4));
        let m = parabolic_matrix(3, &[1.0, 0.0]).unwrap();
        assert_eq!(m[(0, 3)], 0.5);
        let inv = parabolic_matrix(3, &[-1.0, 0.0]).unwrap();
        assert!((m * inv - DMatrix::identity(4, 4)).amax() < 1e-15);
        assert!(matches!(make_parabolic(3, &[1.0]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn bending_element_examples() {
        assert_eq!(bending_matrix::<f64>(3, 0.0), DMatrix::identity(4, 4));
        assert!((bending_matrix(3, 0.7_f64).determinant() - 1.0).abs() < 1e-12);
        let c = bending_matrix(3, 0.7_f64);
        for g in wall_translation_generators::<f64>(3) {
            assert!(commutator(&c, g.matrix()).amax() < 1e-9);
        }
    }

    #[test]
    fn distance_is_zero_on_diagonal() {
        let x = pt(&[1.0, 0.2, -0.1, 1.0]);
        assert!(hyperbolic_distance_q(&x, &x).unwrap().abs() < 1e-12);
        assert_eq!(hyperbolic_distance_q(&x, &pt(&[0.0, 1.0, 0.0, 1.0])), Err(Error::Domain));
    }

    #[test]
    fn identity_centralizes_everything() {
        let id = ProjectiveMap::<f64>::identity(4);
        for which in [
            CentralizerOf::Parabolic,
            CentralizerOf::WallParabolic,
            CentralizerOf::WallStabilizer(wall_stabilizer_generators(3, 2.0, 0.4)),
        ] {
            assert!(centralizer_membership(&id, &which).member);
        }
    }
}
