//! Numerical search for common invariant subspaces of a finitely generated matrix group.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Outcome of the invariant subspace search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IrreducibilityReport {
    /// Every generator is scalar, so every subspace is invariant.
    Degenerate { dimension: usize },
    /// A proper invariant subspace with an orthonormal basis (columns, row-major rows).
    InvariantSubspace { dimension: usize, basis: Vec<Vec<f64>>, residual: f64 },
    /// No invariant subspace was found; evidence of irreducibility, not a proof.
    NoneFound { words: usize, trials: usize },
}

/// Search parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Total number of random words used to form group algebra elements.
    pub words: usize,
    pub trials: usize,
    pub seed: u64,
}

fn orthonormal_extend<S: Scalar>(basis: &mut Vec<DVector<S>>, v: DVector<S>, tol: S) -> bool {
    let mut w = v;
    for _ in 0..2 {
        for b in basis.iter() {
            let p = b.dot(&w);
            w -= b * p;
        }
    }
    let n = w.norm();
    if n > tol {
        basis.push(w / n);
        true
    } else {
        false
    }
}

/// Smallest subspace containing `v` and invariant under `gens`.
fn spin<S: Scalar>(v: &DVector<S>, gens: &[DMatrix<S>], tol: S) -> Vec<DVector<S>> {
    let n = v.len();
    let mut basis = Vec::with_capacity(n);
    orthonormal_extend(&mut basis, v.clone(), tol);
    let mut i = 0;
    while i < basis.len() && basis.len() < n {
        let b = basis[i].clone();
        for g in gens {
            let gb = g * &b;
            let scale = gb.norm();
            if scale > S::zero() {
                orthonormal_extend(&mut basis, gb / scale, tol);
            }
            if basis.len() == n {
                break;
            }
        }
        i += 1;
    }
    basis
}

fn invariance_residual<S: Scalar>(basis: &[DVector<S>], gens: &[DMatrix<S>]) -> S {
    let mut worst = S::zero();
    for g in gens {
        for b in basis {
            let mut w = g * b;
            let scale = w.norm();
            for c in basis {
                let p = c.dot(&w);
                w -= c * p;
            }
            worst = worst.max(w.norm() / scale);
        }
    }
    worst
}

fn random_word_product<S: Scalar>(gens: &[DMatrix<S>], invs: &[DMatrix<S>], rng: &mut ChaCha8Rng) -> DMatrix<S> {
    let n = gens[0].nrows();
    let len = rng.gen_range(1..=8);
    let mut m = DMatrix::identity(n, n);
    for _ in 0..len {
        let i = rng.gen_range(0..gens.len());
        m = if rng.gen_bool(0.5) { m * &gens[i] } else { m * &invs[i] };
        let s = m.amax();
        m /= s;
    }
    m
}

/// MeatAxe-style search: null vectors of `A - λI` for random group-algebra elements `A` are spun under the
/// generators (and under the transposes, for invariant subspaces of the dual).
pub fn irreducibility_heuristic<S: Scalar>(generators: &[DMatrix<S>], budget: SearchBudget) -> IrreducibilityReport {
    let n = generators.first().map_or(0, |g| g.nrows());
    let tol = S::lit(1e-7);
    let is_scalar = |g: &DMatrix<S>| {
        let s = g[(0, 0)];
        (g - DMatrix::from_diagonal_element(n, n, s)).amax() <= tol * g.amax()
    };
    if n == 0 || generators.iter().all(is_scalar) {
        return IrreducibilityReport::Degenerate { dimension: n };
    }
    let gens: Vec<DMatrix<S>> = generators.iter().map(|g| g / g.amax()).collect();
    let invs: Vec<DMatrix<S>> = gens
        .iter()
        .map(|g| {
            let inv = g.clone().try_inverse().unwrap_or_else(|| g.transpose());
            let s = inv.amax();
            inv / s
        })
        .collect();
    let transposed: Vec<DMatrix<S>> = gens.iter().map(|g| g.transpose()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let trials = budget.trials.max(1);
    let per_trial = (budget.words / trials).max(1);
    let mut used = 0;
    for _ in 0..trials {
        let mut a = DMatrix::zeros(n, n);
        for _ in 0..per_trial {
            let c = S::lit(rng.gen::<f64>() * 2.0 - 1.0);
            a += random_word_product(&gens, &invs, &mut rng) * c;
            used += 1;
        }
        for (mat, family, dual) in [(a.clone(), &gens, false), (a.transpose(), &transposed, true)] {
            for ev in mat.complex_eigenvalues().iter() {
                if ev.im.abs() > S::lit(1e-8) * (S::one() + ev.re.abs()) {
                    continue;
                }
                let shifted = &mat - DMatrix::from_diagonal_element(n, n, ev.re);
                let svd = shifted.svd(false, true);
                let Some(vt) = svd.v_t else { continue };
                let smax = svd.singular_values.max().max(S::one());
                for (k, &s) in svd.singular_values.iter().enumerate() {
                    if s > S::lit(1e-6) * smax {
                        continue;
                    }
                    let v = vt.row(k).transpose();
                    let sub = spin(&v, family, S::lit(1e-6));
                    if sub.len() < n {
                        let residual = invariance_residual(&sub, family);
                        if residual < S::lit(1e-6) {
                            let basis = if dual { complement(&sub, n) } else { sub };
                            let residual = invariance_residual(&basis, &gens).to_f64_lossy();
                            return IrreducibilityReport::InvariantSubspace {
                                dimension: basis.len(),
                                basis: basis.iter().map(|b| b.iter().map(|x| x.to_f64_lossy()).collect()).collect(),
                                residual,
                            };
                        }
                    }
                }
            }
        }
    }
    IrreducibilityReport::NoneFound { words: used, trials }
}

/// Orthogonal complement of a span; for a transpose-invariant span it is invariant under the original maps.
fn complement<S: Scalar>(sub: &[DVector<S>], n: usize) -> Vec<DVector<S>> {
    let mut all: Vec<DVector<S>> = sub.to_vec();
    let mut out = Vec::new();
    for i in 0..n {
        let e = DVector::from_fn(n, |k, _| if k == i { S::one() } else { S::zero() });
        if orthonormal_extend(&mut all, e, S::lit(1e-8)) {
            out.push(all.last().expect("just pushed").clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const BUDGET: SearchBudget = SearchBudget { words: 200, trials: 20, seed: 1 };

    #[test]
    fn trivial_group_is_degenerate() {
        let r = irreducibility_heuristic(&[DMatrix::<f64>::identity(3, 3)], BUDGET);
        assert_eq!(r, IrreducibilityReport::Degenerate { dimension: 3 });
    }

    #[test]
    fn block_diagonal_group_splits() {
        let a = DMatrix::from_row_slice(4, 4, &[1.0_f64, 2.0, 0.0, 0.0, 3.0, 1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 0.0, 1.0, 1.0]);
        let b = DMatrix::from_row_slice(4, 4, &[0.0_f64, 1.0, 0.0, 0.0, -1.0, 0.5, 0.0, 0.0, 0.0, 0.0, 1.0, -2.0, 0.0, 0.0, 0.7, 1.0]);
        match irreducibility_heuristic(&[a, b], BUDGET) {
            IrreducibilityReport::InvariantSubspace { dimension, residual, .. } => {
                assert_eq!(dimension, 2);
                assert!(residual < 1e-6);
            }
            other => panic!("expected a splitting, got {other:?}"),
        }
    }
}
