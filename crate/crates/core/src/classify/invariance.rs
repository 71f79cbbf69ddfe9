//! Depth at which a wall translation moves horosphere points less than a Margulis-type constant.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cusp::{BentDomain, BentGroupElement, ModelKind};
use crate::error::{Error, Result};
use crate::hilbert::{hilbert_distance, Paraboloid};
use crate::scalar::Scalar;

/// Maximum spread of the displacement along one horosphere.
pub const SPREAD_TOL: f64 = 1e-6;

/// Certified level `c*` with the displacement measured there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceLevel {
    pub level: f64,
    pub displacement: f64,
    pub spread: f64,
    pub samples: usize,
}

/// Horoball model in which displacements are measured, together with the translation `(0, u)`.
struct Setting<'a, S: Scalar> {
    kind: ModelKind,
    dim: usize,
    u: &'a [S],
}

impl<S: Scalar> Setting<'_, S> {
    /// Chart point of the horosphere of level `c` with transverse coordinates `(log y, w)`.
    fn horosphere_point(&self, c: S, s: S, w: &[S]) -> DVector<S> {
        let d = self.dim;
        let w2 = w.iter().fold(S::zero(), |a, &x| a + x * x) / S::lit(2.0);
        let mut z = DVector::zeros(d);
        match self.kind {
            ModelKind::Standard => {
                z[0] = c + w2;
                for (i, &wi) in w.iter().enumerate() {
                    z[i + 1] = wi;
                }
            }
            ModelKind::Bent => {
                z[0] = c + w2 - s;
                z[1] = s.exp();
                for (i, &wi) in w.iter().enumerate() {
                    z[i + 2] = wi;
                }
            }
        }
        z
    }

    fn translate(&self, z: &DVector<S>) -> DVector<S> {
        match self.kind {
            ModelKind::Standard => {
                let mut v = vec![S::zero()];
                v.extend_from_slice(self.u);
                let mut out = z.clone();
                let vw = (1..self.dim).fold(S::zero(), |a, i| a + v[i - 1] * z[i]);
                let v2 = v.iter().fold(S::zero(), |a, &x| a + x * x);
                out[0] = z[0] + vw + v2 / S::lit(2.0);
                for i in 1..self.dim {
                    out[i] = z[i] + v[i - 1];
                }
                out
            }
            ModelKind::Bent => BentGroupElement::translation(self.u.to_vec()).apply_chart(z),
        }
    }

    fn displacement(&self, z: &DVector<S>) -> Result<S> {
        let gz = self.translate(z);
        match self.kind {
            ModelKind::Standard => hilbert_distance(&Paraboloid::new(self.dim, S::zero()), z, &gz),
            ModelKind::Bent => hilbert_distance(&BentDomain::new(self.dim, S::zero())?, z, &gz),
        }
    }

    fn reference_displacement(&self, c: S) -> Result<S> {
        let w = vec![S::zero(); self.transverse_dim()];
        self.displacement(&self.horosphere_point(c, S::zero(), &w))
    }

    fn transverse_dim(&self) -> usize {
        match self.kind {
            ModelKind::Standard => self.dim - 1,
            ModelKind::Bent => self.dim - 2,
        }
    }
}

/// Displacement `d_H(z, γz)` of the translation `(0, u) ∈ P⁰_{d-1}` at the reference point of level `c`.
pub fn translation_displacement<S: Scalar>(kind: ModelKind, dim: usize, u: &[S], c: S) -> Result<S> {
    Setting { kind, dim, u }.reference_displacement(c)
}

/// Smallest level `c*` where the translation `(0, u)` moves points of the horosphere by less than `eps`,
/// with constancy along that horosphere verified on `samples` random points.
pub fn precise_invariance_level<S: Scalar>(kind: ModelKind, dim: usize, u: &[S], eps: S, samples: usize, seed: u64) -> Result<InvarianceLevel> {
    if u.len() != dim - 2 {
        return Err(Error::Dimension { expected: dim - 2, got: u.len() });
    }
    if !(u.iter().any(|x| *x != S::zero())) || !(eps > S::zero()) {
        return Err(Error::Model("translation must be nontrivial and eps positive".into()));
    }
    let setting = Setting { kind, dim, u };
    let mut lo = S::lit(1e-3);
    let mut hi = S::one();
    while setting.reference_displacement(hi)? >= eps {
        lo = hi;
        hi *= S::lit(2.0);
        if hi > S::lit(1e15) {
            return Err(Error::Model("displacement does not fall below eps".into()));
        }
    }
    if setting.reference_displacement(lo)? < eps {
        hi = lo;
    } else {
        for _ in 0..200 {
            if hi - lo <= S::lit(1e-12) * hi {
                break;
            }
            let mid = (lo + hi) / S::lit(2.0);
            if setting.reference_displacement(mid)? < eps {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min = S::infinity();
    let mut max = -S::infinity();
    for _ in 0..samples {
        let s = S::lit(rng.gen_range(-2.0..2.0));
        let w: Vec<S> = (0..setting.transverse_dim()).map(|_| S::lit(rng.gen_range(-3.0..3.0))).collect();
        let disp = setting.displacement(&setting.horosphere_point(hi, s, &w))?;
        min = min.min(disp);
        max = max.max(disp);
    }
    let displacement = setting.reference_displacement(hi)?;
    let spread = if samples == 0 { S::zero() } else { max - min };
    if !(spread.to_f64_lossy() < SPREAD_TOL) {
        return Err(Error::Model(format!("displacement varies by {:e} along the horosphere", spread.to_f64_lossy())));
    }
    Ok(InvarianceLevel {
        level: hi.to_f64_lossy(),
        displacement: displacement.to_f64_lossy(),
        spread: spread.to_f64_lossy(),
        samples,
    })
}
