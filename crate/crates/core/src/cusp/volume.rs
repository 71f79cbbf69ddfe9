//! Busemann volume of cusp shells `{fundamental cell} × {x ∈ [X, 2X]}` in the standard and bent models.
//!
//! Both model groups act simply transitively on horospheres with constant Jacobian along each orbit, so the
//! Busemann density is `ψ₀(c)` (standard) or `ψ₀(c)/y` (bent) where `c` is the horospherical level. The profile
//! `ψ₀` is tabulated once from the chord oracle at reference points and interpolated in log-log coordinates.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bent::BentDomain;
use crate::error::{Error, Result};
use crate::hilbert::{busemann_density, integrate, Budget, DensityField, DirectionSet, Paraboloid, Region, VolumeEstimate};
use crate::scalar::Scalar;

/// Which cusp model a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Standard,
    Bent,
}

/// A cusp model of dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CuspModel {
    pub kind: ModelKind,
    pub dim: usize,
}

impl CuspModel {
    pub fn new(kind: ModelKind, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Dimension { expected: 2, got: dim });
        }
        Ok(Self { kind, dim })
    }

    /// Horospherical level: `x - ½|w|²` (standard) or `x - ½|v|² + log y` (bent).
    pub fn level<S: Scalar>(&self, z: &DVector<S>) -> S {
        match self.kind {
            ModelKind::Standard => z[0] - z.rows(1, self.dim - 1).norm_squared() / S::lit(2.0),
            ModelKind::Bent => {
                if z[1] <= S::zero() {
                    -S::infinity()
                } else {
                    BentDomain::horo_level(z)
                }
            }
        }
    }

    /// Reference point at level `c`: `(c, 0)` or `(c, 1, 0)`.
    pub fn reference_point<S: Scalar>(&self, c: S) -> DVector<S> {
        let mut z = DVector::zeros(self.dim);
        z[0] = c;
        if self.kind == ModelKind::Bent {
            z[1] = S::one();
        }
        z
    }

    /// Busemann density of the model domain computed directly from its chord oracle.
    pub fn direct_density<S: Scalar>(&self, z: &DVector<S>, dirs: &DirectionSet<S>) -> Result<S> {
        match self.kind {
            ModelKind::Standard => busemann_density(&Paraboloid::new(self.dim, S::zero()), z, dirs),
            ModelKind::Bent => busemann_density(&BentDomain::new(self.dim, S::zero())?, z, dirs),
        }
    }
}

/// Log-log table of `ψ₀(c)`.
#[derive(Debug, Clone)]
pub struct LevelProfile<S: Scalar> {
    log_c0: S,
    step: S,
    log_psi: Vec<S>,
}

impl<S: Scalar> LevelProfile<S> {
    /// Tabulates `ψ₀` on `[c_min, c_max]` with `per_doubling` nodes per factor of two.
    pub fn build(model: &CuspModel, c_min: S, c_max: S, per_doubling: usize, dirs: &DirectionSet<S>) -> Result<Self> {
        if !(c_min > S::zero()) || !(c_max > c_min) {
            return Err(Error::Model("profile range must satisfy 0 < c_min < c_max".into()));
        }
        let step = S::LN_2() / S::from_usize(per_doubling.max(1)).expect("count");
        let log_c0 = c_min.ln();
        let n = ((c_max.ln() - log_c0) / step).ceil().to_usize().unwrap_or(0) + 2;
        let log_psi = (0..n)
            .into_par_iter()
            .map(|i| {
                let c = (log_c0 + step * S::from_usize(i).expect("index")).exp();
                model.direct_density(&model.reference_point(c), dirs).map(|p| p.ln())
            })
            .collect::<Result<Vec<S>>>()?;
        Ok(Self { log_c0, step, log_psi })
    }

    pub fn eval(&self, c: S) -> S {
        let pos = (c.ln() - self.log_c0) / self.step;
        let last = self.log_psi.len() - 2;
        let i = pos.floor().max(S::zero()).min(S::from_usize(last).expect("index"));
        let k = i.to_usize().unwrap_or(0);
        let frac = pos - i;
        (self.log_psi[k] + (self.log_psi[k + 1] - self.log_psi[k]) * frac).exp()
    }
}

/// Busemann density of a cusp model through its level profile.
pub struct HoroDensity<S: Scalar> {
    pub model: CuspModel,
    pub profile: LevelProfile<S>,
}

impl<S: Scalar> DensityField<S> for HoroDensity<S> {
    fn density(&self, z: &DVector<S>) -> S {
        let c = self.model.level(z);
        if !(c > S::zero()) {
            return S::zero();
        }
        let psi = self.profile.eval(c);
        match self.model.kind {
            ModelKind::Standard => psi,
            ModelKind::Bent => psi / z[1],
        }
    }
}

/// Fundamental parallelepiped of a lattice in the group parameters: `(v)` for `P_d`, `(b, v)` for `B_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeCell<S: Scalar> {
    pub origin: DVector<S>,
    /// Columns are the lattice basis vectors.
    pub basis: DMatrix<S>,
}

impl<S: Scalar> LatticeCell<S> {
    pub fn new(origin: DVector<S>, basis: DMatrix<S>) -> Result<Self> {
        let m = origin.len();
        if basis.nrows() != m || basis.ncols() != m {
            return Err(Error::Dimension { expected: m, got: basis.ncols() });
        }
        let det = basis.determinant().abs();
        let scale = basis.amax().powi(i32::try_from(m).expect("small"));
        if !(det > scale * S::lit(1e-12)) {
            return Err(Error::Lattice);
        }
        Ok(Self { origin, basis })
    }

    pub fn covolume(&self) -> S {
        self.basis.determinant().abs()
    }

    pub fn point(&self, u: &[S]) -> DVector<S> {
        &self.origin + &self.basis * DVector::from_column_slice(u)
    }

    /// Smallest distance between opposite faces.
    pub fn min_width(&self) -> S {
        let inv = self.basis.clone().try_inverse().expect("checked nonsingular");
        (0..inv.nrows()).map(|i| S::one() / inv.row(i).norm()).fold(S::infinity(), |a, b| a.min(b))
    }

    fn vertices(&self) -> Vec<DVector<S>> {
        let m = self.origin.len();
        (0..1usize << m)
            .map(|mask| {
                let u: Vec<S> = (0..m).map(|i| if mask >> i & 1 == 1 { S::one() } else { S::zero() }).collect();
                self.point(&u)
            })
            .collect()
    }

    /// Bounds on the boundary graph height over the cell: `½|v|²` or `½|v|² - b`.
    pub fn graph_bounds(&self, kind: ModelKind) -> (S, S) {
        let verts = self.vertices();
        let value = |p: &DVector<S>| -> S {
            match kind {
                ModelKind::Standard => p.norm_squared() / S::lit(2.0),
                ModelKind::Bent => p.rows(1, p.len() - 1).norm_squared() / S::lit(2.0) - p[0],
            }
        };
        let hi = verts.iter().map(value).fold(-S::infinity(), |a, b| a.max(b));
        let lo = match kind {
            ModelKind::Standard => S::zero(),
            ModelKind::Bent => -verts.iter().map(|p| p[0]).fold(-S::infinity(), |a, b| a.max(b)),
        };
        (lo, hi)
    }
}

/// The shell `{cell} × {x ∈ [X, 2X]}` of the cusp, parametrized by the unit cube.
pub struct ShellRegion<'a, S: Scalar> {
    pub model: CuspModel,
    pub cell: &'a LatticeCell<S>,
    pub x: S,
}

impl<S: Scalar> Region<S> for ShellRegion<'_, S> {
    fn param_dim(&self) -> usize {
        self.model.dim
    }

    fn sample(&self, u: &[S]) -> Option<(DVector<S>, S)> {
        let d = self.model.dim;
        let x = self.x * (S::one() + u[0]);
        let p = self.cell.point(&u[1..]);
        let base = self.x * self.cell.covolume();
        let mut z = DVector::zeros(d);
        z[0] = x;
        let weight = match self.model.kind {
            ModelKind::Standard => {
                z.rows_mut(1, d - 1).copy_from(&p);
                base
            }
            ModelKind::Bent => {
                let y = p[0].exp();
                z[1] = y;
                z.rows_mut(2, d - 2).copy_from(&p.rows(1, d - 2));
                base * y
            }
        };
        (self.model.level(&z) > S::zero()).then_some((z, weight))
    }
}

/// Volume estimate of one shell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellEstimate {
    pub x: f64,
    pub estimate: VolumeEstimate,
}

/// Shell volumes over the schedule `X_k = 2^k X_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellSeries {
    pub model: CuspModel,
    pub shells: Vec<ShellEstimate>,
}

impl ShellSeries {
    pub fn partial_sums(&self) -> Vec<f64> {
        self.shells
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s.estimate.value;
                Some(*acc)
            })
            .collect()
    }

    /// Consecutive ratios `V_{k+1}/V_k` with their propagated standard errors.
    pub fn ratios(&self) -> Vec<(f64, f64)> {
        self.shells
            .windows(2)
            .map(|w| {
                let (a, b) = (&w[0].estimate, &w[1].estimate);
                let r = b.value / a.value;
                let rel = ((a.standard_error / a.value).powi(2) + (b.standard_error / b.value).powi(2)).sqrt();
                (r, r * rel)
            })
            .collect()
    }

    /// Every consecutive ratio is below `bound` even after adding `sigmas` standard errors.
    pub fn decays(&self, bound: f64, sigmas: f64) -> bool {
        let r = self.ratios();
        !r.is_empty() && r.iter().all(|(q, s)| q + sigmas * s < bound)
    }

    /// Some run of `run` successive shells each adds more than `sigmas` standard errors to the partial sum.
    pub fn diverges(&self, run: usize, sigmas: f64) -> bool {
        let mut streak = 0;
        for s in &self.shells {
            if s.estimate.value > sigmas * s.estimate.standard_error && s.estimate.value > 0.0 {
                streak += 1;
                if streak >= run {
                    return true;
                }
            } else {
                streak = 0;
            }
        }
        false
    }

    pub const CSV_HEADER: &'static str = "X,value,stderr,samples,seed";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for s in &self.shells {
            out.push_str(&format!("{},{}\n", s.x, s.estimate.csv_row()));
        }
        out
    }
}

/// Default first shell `X_0`: a power of two keeping every shell point at level at least 1.
pub fn default_first_shell<S: Scalar>(model: &CuspModel, cell: &LatticeCell<S>) -> f64 {
    let (_, hi) = cell.graph_bounds(model.kind);
    let need = (hi.to_f64_lossy() + 1.0).max(1.0);
    2f64.powi(need.log2().ceil() as i32)
}

/// Shell volume estimates for `X = 2^k X_0`, `k = 0..shells`.
///
/// Shell `k` is sampled with seed `budget.seed + k`.
pub fn cusp_volume_estimate<S: Scalar>(
    model: CuspModel,
    cell: &LatticeCell<S>,
    x0: S,
    shells: usize,
    dirs: &DirectionSet<S>,
    budget: Budget,
) -> Result<ShellSeries> {
    let expected = model.dim - 1;
    if cell.origin.len() != expected {
        return Err(Error::Dimension { expected, got: cell.origin.len() });
    }
    if !(x0 > S::zero()) || shells == 0 {
        return Err(Error::Model("shell schedule must be nonempty with X_0 > 0".into()));
    }
    let (lo, hi) = cell.graph_bounds(model.kind);
    let c_min = (x0 - hi).max(S::lit(1e-3) * x0);
    let two = S::lit(2.0);
    let x_last = x0 * two.powi(i32::try_from(shells).expect("small"));
    let c_max = x_last - lo + S::one();
    let profile = LevelProfile::build(&model, c_min, c_max, 32, dirs)?;
    let density = HoroDensity { model, profile };
    let mut out = Vec::with_capacity(shells);
    let mut x = x0;
    for k in 0..shells {
        let region = ShellRegion { model, cell, x };
        let estimate = integrate(&density, &region, Budget { samples: budget.samples, seed: budget.seed.wrapping_add(k as u64) });
        out.push(ShellEstimate { x: x.to_f64_lossy(), estimate });
        x *= two;
    }
    Ok(ShellSeries { model, shells: out })
}

const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_48),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_48),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// Hyperbolic volume of a standard shell from the closed-form density `(2c)^{-(d+1)/2}`, by quadrature over the cell.
pub fn standard_shell_volume_exact(d: usize, cell: &LatticeCell<f64>, x: f64) -> f64 {
    let m = d - 1;
    let k = (d as f64 + 1.0) / 2.0;
    let antiderivative = |t: f64, a: f64| (2.0 * (t - a)).powf(1.0 - k) / (2.0 * (1.0 - k));
    let panels = 16usize;
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|p| {
            GAUSS8.iter().map(move |&(g, w)| {
                let h = 1.0 / panels as f64;
                ((p as f64 + (g + 1.0) / 2.0) * h, w * h / 2.0)
            })
        })
        .collect();
    let mut total = 0.0;
    let mut idx = vec![0usize; m];
    loop {
        let u: Vec<f64> = idx.iter().map(|&i| nodes[i].0).collect();
        let w: f64 = idx.iter().map(|&i| nodes[i].1).product();
        let p = cell.point(&u);
        let a = p.norm_squared() / 2.0;
        total += w * (antiderivative(2.0 * x, a) - antiderivative(x, a));
        let mut j = 0;
        loop {
            if j == m {
                return total * cell.covolume();
            }
            idx[j] += 1;
            if idx[j] < nodes.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_density_is_hyperbolic() {
        let model = CuspModel::new(ModelKind::Standard, 3).unwrap();
        let dirs = DirectionSet::<f64>::new(3, 1 << 12, 3);
        for c in [0.5, 1.0, 4.0, 64.0, 1024.0] {
            let psi = model.direct_density(&model.reference_point(c), &dirs).unwrap();
            let exact = (2.0 * c).powf(-2.0);
            assert!((psi - exact).abs() < 1e-3 * exact, "{psi} vs {exact}");
        }
    }

    #[test]
    fn deep_bent_plane_density_tends_to_quadrant_value() {
        let model = CuspModel::new(ModelKind::Bent, 2).unwrap();
        let dirs = DirectionSet::<f64>::new(2, 1 << 12, 3);
        let c = 4096.0;
        let psi = model.direct_density(&model.reference_point(c), &dirs).unwrap();
        let quadrant = std::f64::consts::PI / 12.0;
        assert!((psi * c - quadrant).abs() < 1e-3, "{}", psi * c);
    }

    #[test]
    fn degenerate_cell_is_rejected() {
        let b = DMatrix::from_row_slice(2, 2, &[1.0_f64, 2.0, 0.5, 1.0]);
        assert_eq!(LatticeCell::new(DVector::zeros(2), b).unwrap_err(), Error::Lattice);
    }
}
