//! Classification of bent peripheral holonomy as standard, bent or degenerate.

mod circle;
mod invariance;
mod normal_form;
mod sandwich;

pub use circle::{affine_circle_developing, AffineCircle, SignedPoint};
pub use invariance::{precise_invariance_level, translation_displacement, InvarianceLevel, SPREAD_TOL};
pub use normal_form::{
    centralizer_entries, centralizes, normal_form, pencil_action, CentralizerEntries, CuspKind, NormalForm, PencilAction,
};
pub use sandwich::{cell_chart_point, horoball_sandwich, model_graph, periodic_perturbation, Sandwich, DEFAULT_GRID};

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::cusp::{degenerate_affine_line_witness, AffineLineWitness, DegenerateVariant};
use crate::error::{Error, Result};
use crate::hyperbolic::parabolic_matrix;
use crate::projective::ProjectiveMap;
use crate::scalar::Scalar;

/// Default relative tolerance for `β = 1`.
pub const DEFAULT_BETA_TOL: f64 = 1e-7;

/// Wall translations `Δ∞`, the peripheral element `γ` and the signed wall intersections of the cusp curve.
#[derive(Debug, Clone, PartialEq)]
pub struct PeripheralData<S: Scalar> {
    pub delta: Vec<ProjectiveMap<S>>,
    pub gamma: ProjectiveMap<S>,
    pub signed_points: Vec<SignedPoint>,
}

impl<S: Scalar> PeripheralData<S> {
    pub fn dimension(&self) -> usize {
        self.gamma.size() - 1
    }

    /// Checks that every `Δ∞` generator lies in `P⁰_{d-1}` and commutes with `γ`.
    pub fn validate(&self) -> Result<()> {
        let d = self.dimension();
        for g in &self.delta {
            if g.size() != d + 1 {
                return Err(Error::Dimension { expected: d + 1, got: g.size() });
            }
            let r = wall_translation_residual(g)?;
            if r > S::residual_tol() {
                return Err(Error::Model(format!("wall generator leaves P⁰ by {:e}", r.to_f64_lossy())));
            }
        }
        let residual = centralizes(&self.gamma, &self.delta);
        if residual > S::residual_tol() {
            return Err(Error::NotInCentralizer { residual: residual.to_f64_lossy() });
        }
        Ok(())
    }

    /// Conjugates `γ` and `Δ∞` by `c`.
    pub fn conjugate_by(&self, c: &ProjectiveMap<S>) -> Self {
        Self {
            delta: self.delta.iter().map(|g| g.conjugate_by(c)).collect(),
            gamma: self.gamma.conjugate_by(c),
            signed_points: self.signed_points.clone(),
        }
    }
}

/// Translation part `u` of a normalized element of `P⁰_{d-1}`.
fn wall_translation_params<S: Scalar>(m: &DMatrix<S>) -> Vec<S> {
    let d = m.nrows() - 1;
    let lead = m[(0, 0)];
    (2..d).map(|i| m[(0, i)] / lead).collect()
}

fn wall_translation_residual<S: Scalar>(g: &ProjectiveMap<S>) -> Result<S> {
    let m = g.matrix();
    let d = m.nrows() - 1;
    let lead = m[(0, 0)];
    if lead == S::zero() {
        return Ok(S::infinity());
    }
    let mut v = vec![S::zero()];
    v.extend(wall_translation_params(m));
    let target = parabolic_matrix(d, &v)?;
    Ok((m / lead - &target).amax() / (S::one() + target.amax()))
}

/// Options for [`classify`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub beta_tol: f64,
    pub witness_terms: u32,
    pub seed: u64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self { beta_tol: DEFAULT_BETA_TOL, witness_terms: 40, seed: 0 }
    }
}

/// Holonomy of the affine circle developed from the signed intersection points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircleSummary {
    /// Bending parameter of the circle, `(d + 1) t`.
    pub t: f64,
    pub scale: f64,
    pub offset: f64,
    pub predicted_standard: bool,
    /// `|scale - β| / β`.
    pub beta_mismatch: f64,
}

/// Classification of one cusp at one bending parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspReport {
    pub cusp: String,
    pub t: f64,
    pub seed: u64,
    pub tolerance: f64,
    pub kind: CuspKind,
    pub non_convex: bool,
    pub pencil_action: [[f64; 2]; 2],
    pub b: f64,
    pub centralizer_residual: f64,
    pub conjugator: Vec<Vec<f64>>,
    pub normal_form: Vec<Vec<f64>>,
    pub normal_params: Vec<f64>,
    pub affine_circle: Option<CircleSummary>,
    pub witness: Option<AffineLineWitness>,
}

fn rows<S: Scalar>(m: &DMatrix<S>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].to_f64_lossy()).collect()).collect()
}

/// Classifies the cusp with peripheral data `data` of the representation bent at `t`.
pub fn classify<S: Scalar>(name: &str, data: &PeripheralData<S>, t: f64, options: ClassifyOptions) -> Result<CuspReport> {
    data.validate()?;
    let d = data.dimension();
    let nf = normal_form(&data.gamma, S::lit(options.beta_tol))?;
    let beta = nf.pencil.beta.to_f64_lossy();
    let t_circle = (d as f64 + 1.0) * t;
    let circle = affine_circle_developing(&data.signed_points, t_circle)?;
    let affine_circle = Some(CircleSummary {
        t: t_circle,
        scale: circle.scale,
        offset: circle.offset,
        predicted_standard: (circle.scale - 1.0).abs() <= options.beta_tol,
        beta_mismatch: (circle.scale - beta).abs() / beta,
    });
    let witness = if nf.kind.is_degenerate() {
        Some(witness_for(&nf, data, options.witness_terms)?)
    } else {
        None
    };
    let p = nf.pencil.matrix();
    Ok(CuspReport {
        cusp: name.to_string(),
        t,
        seed: options.seed,
        tolerance: options.beta_tol,
        kind: nf.kind,
        non_convex: nf.kind.is_degenerate(),
        pencil_action: [[p[0][0].to_f64_lossy(), p[0][1].to_f64_lossy()], [0.0, 1.0]],
        b: nf.pencil.log_beta().to_f64_lossy(),
        centralizer_residual: centralizes(&data.gamma, &data.delta).to_f64_lossy(),
        conjugator: rows(&nf.conjugator),
        normal_form: rows(&nf.normal),
        normal_params: nf.params.iter().map(|x| x.to_f64_lossy()).collect(),
        affine_circle,
        witness,
    })
}

/// Witness for the lattice spanned by `γ` and `Δ∞` in the degenerate normal form.
fn witness_for<S: Scalar>(nf: &NormalForm<S>, data: &PeripheralData<S>, terms: u32) -> Result<AffineLineWitness> {
    let d = data.dimension();
    if data.delta.len() + 1 != d - 1 {
        return Err(Error::Lattice);
    }
    let c = ProjectiveMap::new(nf.conjugator.clone())?;
    let mut basis = DMatrix::zeros(d - 1, d - 1);
    basis.set_column(0, &nalgebra::DVector::from_vec(nf.params.clone()));
    for (k, g) in data.delta.iter().enumerate() {
        let u = wall_translation_params(g.conjugate_by(&c).matrix());
        for (i, ui) in u.into_iter().enumerate() {
            basis[(i + 1, k + 1)] = ui;
        }
    }
    let variant = match nf.kind {
        CuspKind::DegenerateP => DegenerateVariant::PPrime,
        _ => DegenerateVariant::BPrime,
    };
    degenerate_affine_line_witness(variant, &basis, terms)
}
