//! Horoball sandwiches `H_int ⊂ Ω ⊂ H_ext` certified on a grid over a fundamental cell.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::cusp::{bent_graph, standard_graph, LatticeCell, ModelKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Default grid resolution per cell dimension.
pub const DEFAULT_GRID: usize = 64;

/// Certified offsets: `h < model + D` and `model - E < h` on the cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub upper: f64,
    pub lower: f64,
    /// Grid modulus added to both offsets.
    pub margin: f64,
    pub samples: usize,
}

/// Chart coordinates `(v)` or `(y, v)` of a cell parameter point `(v)` or `(log y, v)`.
pub fn cell_chart_point<S: Scalar>(kind: ModelKind, p: &DVector<S>) -> DVector<S> {
    match kind {
        ModelKind::Standard => p.clone(),
        ModelKind::Bent => {
            let mut q = p.clone();
            q[0] = p[0].exp();
            q
        }
    }
}

/// Model graph `f_0(v)` or `g_0(y, v)` at chart coordinates.
pub fn model_graph<S: Scalar>(kind: ModelKind, q: &DVector<S>) -> S {
    match kind {
        ModelKind::Standard => standard_graph(q.as_slice(), S::zero()),
        ModelKind::Bent => bent_graph(q[0], &q.as_slice()[1..], S::zero()),
    }
}

/// Finds `D, E ≥ 0` with `f_0 - E < h < f_0 + D` (or with `g_0`) on the cell, from a `grid^{d-1}` sample.
///
/// `graph` evaluates the boundary height `h` at chart coordinates `(v)` (standard) or `(y, v)` (bent).
pub fn horoball_sandwich<S: Scalar>(
    graph: impl Fn(&DVector<S>) -> S,
    kind: ModelKind,
    cell: &LatticeCell<S>,
    grid: usize,
) -> Result<Sandwich> {
    let m = cell.origin.len();
    let grid = grid.max(2);
    let total = grid.pow(u32::try_from(m).expect("small"));
    let mut diff = Vec::with_capacity(total);
    for idx in 0..total {
        let mut rest = idx;
        let u: Vec<S> = (0..m)
            .map(|_| {
                let i = rest % grid;
                rest /= grid;
                S::from_f64((i as f64 + 0.5) / grid as f64).expect("grid")
            })
            .collect();
        let q = cell_chart_point(kind, &cell.point(&u));
        let phi = (graph(&q) - model_graph(kind, &q)).to_f64_lossy();
        if !phi.is_finite() || phi.abs() > 1e12 {
            return Err(Error::SandwichFailure);
        }
        diff.push(phi);
    }
    let mut margin = 0.0;
    let mut stride = 1;
    for _ in 0..m {
        let mut worst: f64 = 0.0;
        for idx in 0..total {
            if (idx / stride) % grid + 1 < grid {
                worst = worst.max((diff[idx + stride] - diff[idx]).abs());
            }
        }
        margin += worst / 2.0;
        stride *= grid;
    }
    let upper = diff.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lower = diff.iter().map(|x| -x).fold(f64::NEG_INFINITY, f64::max);
    Ok(Sandwich {
        upper: (upper + margin).max(0.0),
        lower: (lower + margin).max(0.0),
        margin,
        samples: total,
    })
}

/// Boundary height `model + amplitude · Π cos(2π u_i)` periodic under the lattice of `cell`.
pub fn periodic_perturbation<S: Scalar>(kind: ModelKind, cell: &LatticeCell<S>, amplitude: S) -> impl Fn(&DVector<S>) -> S + '_ {
    let inv = cell.basis.clone().try_inverse().expect("cells are nonsingular");
    move |q: &DVector<S>| {
        let mut p = q.clone();
        if kind == ModelKind::Bent {
            p[0] = q[0].ln();
        }
        let u = &inv * (p - &cell.origin);
        let wave = u.iter().fold(S::one(), |a, &x| a * (S::TAU() * x).cos());
        model_graph(kind, q) + amplitude * wave
    }
}
