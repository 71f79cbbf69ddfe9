//! Bending deformations `ρ_t` of holonomy data along a wall, for amalgams and HNN extensions.

mod irreducible;
mod word;

pub use irreducible::{irreducibility_heuristic, IrreducibilityReport, SearchBudget};
pub use word::{Letter, Word, WordSpec};

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperbolic::{bending_matrix, commutator};
use crate::projective::{ProjectiveMap, ProjectivePoint};
use crate::scalar::{tol, Scalar};

/// How the group splits along the wall group `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplittingCase {
    /// `Γ = Γ₁ *_Δ Γ₂`; the generators of `Γ₂` are conjugated by `c_t`.
    Amalgam,
    /// `Γ = Γ_Σ *_s`; the stable letter `s` is replaced by `c_t s`.
    Hnn,
}

/// Presentation data with matrix generators of `ρ₀`.
#[derive(Debug, Clone, PartialEq)]
pub struct BendingData<S: Scalar> {
    pub case: SplittingCase,
    pub dimension: usize,
    pub generators: BTreeMap<String, ProjectiveMap<S>>,
    /// Generators of `Δ` as words.
    pub delta: Vec<Word>,
    pub relators: Vec<Word>,
    /// Stable letter of an HNN extension.
    pub stable_letter: Option<String>,
    /// Generators of the factor `Γ₂` of an amalgam.
    pub second_factor: Vec<String>,
}

impl<S: Scalar> BendingData<S> {
    /// Checks symbols and the case-specific fields.
    pub fn validate(&self) -> Result<()> {
        for g in self.generators.values() {
            if g.size() != self.dimension + 1 {
                return Err(Error::Dimension { expected: self.dimension + 1, got: g.size() });
            }
        }
        let known = |name: &str| -> Result<()> {
            if self.generators.contains_key(name) {
                Ok(())
            } else {
                Err(Error::Word(format!("unknown generator {name:?}")))
            }
        };
        for w in self.delta.iter().chain(&self.relators) {
            for l in &w.0 {
                known(&l.name)?;
            }
        }
        match self.case {
            SplittingCase::Hnn => known(self.stable_letter.as_deref().ok_or_else(|| Error::Word("HNN data needs a stable letter".into()))?),
            SplittingCase::Amalgam => self.second_factor.iter().try_for_each(|n| known(n)),
        }
    }

    /// Whether generator `name` is modified by bending.
    fn is_bent(&self, name: &str) -> bool {
        match self.case {
            SplittingCase::Amalgam => self.second_factor.iter().any(|n| n == name),
            SplittingCase::Hnn => self.stable_letter.as_deref() == Some(name),
        }
    }
}

/// The representation `ρ_t` given by generator images.
#[derive(Debug, Clone, PartialEq)]
pub struct BentRepresentation<S: Scalar> {
    pub data: BendingData<S>,
    pub t: S,
    images: BTreeMap<String, (DMatrix<S>, DMatrix<S>)>,
}

fn invert<S: Scalar>(m: &DMatrix<S>) -> DMatrix<S> {
    m.clone().try_inverse().expect("generator images are invertible")
}

impl<S: Scalar> BentRepresentation<S> {
    /// The unbent representation `ρ₀`.
    pub fn unbent(data: BendingData<S>) -> Result<Self> {
        data.validate()?;
        let images = data
            .generators
            .iter()
            .map(|(k, g)| (k.clone(), (g.matrix().clone(), invert(g.matrix()))))
            .collect();
        Ok(Self { data, t: S::zero(), images })
    }

    pub fn dimension(&self) -> usize {
        self.data.dimension
    }

    pub fn image(&self, name: &str) -> Option<&DMatrix<S>> {
        self.images.get(name).map(|(m, _)| m)
    }

    /// Generator images in name order.
    pub fn generator_images(&self) -> Vec<DMatrix<S>> {
        self.images.values().map(|(m, _)| m.clone()).collect()
    }

    fn evaluate_matrix(&self, word: &Word) -> Result<DMatrix<S>> {
        let n = self.dimension() + 1;
        let mut m = DMatrix::identity(n, n);
        for l in &word.0 {
            let (g, gi) = self.images.get(&l.name).ok_or_else(|| Error::Word(format!("unknown generator {:?}", l.name)))?;
            let f = if l.power > 0 { g } else { gi };
            for _ in 0..l.power.unsigned_abs() {
                m = m * f;
            }
        }
        Ok(m)
    }

    /// Left-to-right product of generator images.
    pub fn evaluate_word(&self, word: &Word) -> Result<ProjectiveMap<S>> {
        ProjectiveMap::new(self.evaluate_matrix(word)?)
    }

    /// `min(‖M - I‖, ‖M + I‖)` for the normalized image of each relator.
    pub fn relator_residuals(&self) -> Result<Vec<S>> {
        self.data.relators.iter().map(|r| Ok(self.evaluate_word(r)?.identity_residual())).collect()
    }
}

/// Bends `ρ₀` to `ρ_t`, verifying that `c_t` centralizes `Δ` and that every relator still holds.
pub fn bend<S: Scalar>(data: &BendingData<S>, t: S) -> Result<BentRepresentation<S>> {
    let base = BentRepresentation::unbent(data.clone())?;
    if t == S::zero() {
        check_relators(&base)?;
        return Ok(base);
    }
    let d = data.dimension;
    let c = bending_matrix(d, t);
    let c_inv = bending_matrix(d, -t);
    for w in &data.delta {
        let g = base.evaluate_word(w)?;
        let residual = commutator(&c, g.matrix()).amax() / (c.amax() * g.matrix().amax());
        if residual > tol::<S>() {
            return Err(Error::IllFormedBending {
                what: format!("c_t does not centralize the wall element {w}"),
                residual: residual.to_f64_lossy(),
            });
        }
    }
    let mut images = base.images.clone();
    for (name, (g, gi)) in images.iter_mut() {
        if !data.is_bent(name) {
            continue;
        }
        match data.case {
            SplittingCase::Amalgam => {
                *g = &c * &*g * &c_inv;
                *gi = &c * &*gi * &c_inv;
            }
            SplittingCase::Hnn => {
                *g = &c * &*g;
                *gi = &*gi * &c_inv;
            }
        }
    }
    let rep = BentRepresentation { data: data.clone(), t, images };
    check_relators(&rep)?;
    Ok(rep)
}

fn check_relators<S: Scalar>(rep: &BentRepresentation<S>) -> Result<()> {
    for (r, res) in rep.data.relators.iter().zip(rep.relator_residuals()?) {
        if !(res < S::residual_tol()) {
            return Err(Error::IllFormedBending { what: format!("relator {r} fails"), residual: res.to_f64_lossy() });
        }
    }
    Ok(())
}

/// Piece of the cut-open manifold containing a tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Unbent side `Ñ₁` of an amalgam.
    First,
    /// Bent side `Ñ₂` of an amalgam.
    Second,
    /// The single piece of an HNN extension.
    Single,
}

/// Bent developing map on the tile `(γ, side)`: `ρ_t(γ) D₀(p)`, or `ρ_t(γ) c_t D₀(p)` on the bent side.
pub fn developing_transform<S: Scalar>(
    rep: &BentRepresentation<S>,
    gamma: &Word,
    side: Side,
    p: &ProjectivePoint<S>,
) -> Result<ProjectivePoint<S>> {
    let g = rep.evaluate_word(gamma)?;
    let q = match side {
        Side::Second => ProjectiveMap::new(bending_matrix(rep.dimension(), rep.t))?.apply(p),
        Side::First | Side::Single => p.clone(),
    };
    Ok(g.apply(&q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolic::parabolic_matrix;

    fn amalgam() -> BendingData<f64> {
        let pm = |v: &[f64]| ProjectiveMap::new(parabolic_matrix(3, v).unwrap()).unwrap();
        let mut generators = BTreeMap::new();
        generators.insert("a".into(), pm(&[0.8, 0.1]));
        generators.insert("b".into(), pm(&[0.8, -0.3]));
        generators.insert("d".into(), pm(&[0.0, 1.0]));
        generators.insert("e".into(), pm(&[0.0, 1.0]));
        BendingData {
            case: SplittingCase::Amalgam,
            dimension: 3,
            generators,
            delta: vec![Word::generator("d"), Word::generator("e")],
            relators: vec![Word::parse("d e^-1").unwrap(), Word::parse("a d a^-1 d^-1").unwrap(), Word::parse("b e b^-1 e^-1").unwrap()],
            stable_letter: None,
            second_factor: vec!["b".into(), "e".into()],
        }
    }

    #[test]
    fn zero_bending_is_exact() {
        let data = amalgam();
        let rep = bend(&data, 0.0).unwrap();
        for (name, g) in &data.generators {
            assert_eq!(rep.image(name).unwrap(), g.matrix());
        }
    }

    #[test]
    fn wall_elements_are_unchanged() {
        let rep = bend(&amalgam(), 0.5).unwrap();
        let e0 = amalgam().generators["e"].matrix().clone();
        assert!((rep.image("e").unwrap() - e0).amax() < 1e-12);
        assert!(rep.relator_residuals().unwrap().iter().all(|r| *r < 1e-8));
    }

    #[test]
    fn word_evaluation() {
        let rep = bend(&amalgam(), 0.3).unwrap();
        assert!(rep.evaluate_word(&Word::empty()).unwrap().approx_eq(&ProjectiveMap::identity(4), 0.0));
        assert!(rep.evaluate_word(&Word::parse("a a^-1").unwrap()).unwrap().identity_residual() < 1e-14);
        assert!(matches!(rep.evaluate_word(&Word::generator("zz")), Err(Error::Word(_))));
    }

    #[test]
    fn non_central_wall_is_rejected() {
        let mut data = amalgam();
        data.delta.push(Word::generator("a"));
        assert!(matches!(bend(&data, 0.5), Err(Error::IllFormedBending { .. })));
    }
}
