//! Deterministic low-discrepancy direction sets on the unit sphere.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Scalar;

/// Default number of directions for unit-ball integration.
pub const DEFAULT_DIRECTIONS: usize = 1 << 12;

const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

fn radical_inverse(mut i: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    r
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Unit directions whose first half is itself a well-spread set, so halving `K` gives an error estimate.
#[derive(Debug, Clone)]
pub struct DirectionSet<S: Scalar> {
    dim: usize,
    seed: u64,
    dirs: Vec<DVector<S>>,
}

impl<S: Scalar> DirectionSet<S> {
    /// `count` directions in R^`dim`, randomized by a Cranley–Patterson shift drawn from `seed`.
    ///
    /// In dimension 1 the set is always `{+1, -1}`.
    pub fn new(dim: usize, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let count = count.max(2);
        let to_s = |v: Vec<f64>| DVector::from_iterator(v.len(), v.into_iter().map(S::lit));
        let dirs = match dim {
            0 => Vec::new(),
            1 => vec![to_s(vec![1.0]), to_s(vec![-1.0])],
            2 => {
                let shift: f64 = rng.gen();
                (0..count)
                    .map(|j| {
                        let a = std::f64::consts::TAU * frac(radical_inverse(j as u64, 2) + shift);
                        to_s(vec![a.cos(), a.sin()])
                    })
                    .collect()
            }
            3 => {
                let s: [f64; 2] = [rng.gen(), rng.gen()];
                (0..count)
                    .map(|j| {
                        let i = j as u64 + 1;
                        let z = 1.0 - 2.0 * frac(radical_inverse(i, 2) + s[0]);
                        let phi = std::f64::consts::TAU * frac(radical_inverse(i, 3) + s[1]);
                        let r = (1.0 - z * z).max(0.0).sqrt();
                        to_s(vec![r * phi.cos(), r * phi.sin(), z])
                    })
                    .collect()
            }
            _ => {
                let pairs = dim.div_ceil(2);
                assert!(2 * pairs <= PRIMES.len(), "dimension {dim} exceeds the Halton table");
                let shifts: Vec<f64> = (0..2 * pairs).map(|_| rng.gen()).collect();
                (0..count)
                    .map(|j| {
                        let i = j as u64 + 1;
                        let mut g = Vec::with_capacity(2 * pairs);
                        for p in 0..pairs {
                            let a = frac(radical_inverse(i, PRIMES[2 * p]) + shifts[2 * p]).max(1e-300);
                            let b = frac(radical_inverse(i, PRIMES[2 * p + 1]) + shifts[2 * p + 1]);
                            let r = (-2.0 * a.ln()).sqrt();
                            let ang = std::f64::consts::TAU * b;
                            g.push(r * ang.cos());
                            g.push(r * ang.sin());
                        }
                        g.truncate(dim);
                        let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
                        to_s(g.into_iter().map(|x| x / n).collect())
                    })
                    .collect()
            }
        };
        Self { dim, seed, dirs }
    }

    pub fn with_default_count(dim: usize, seed: u64) -> Self {
        Self::new(dim, DEFAULT_DIRECTIONS, seed)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn directions(&self) -> &[DVector<S>] {
        &self.dirs
    }

    /// Whether the halved set carries an independent estimate.
    pub fn has_nested_half(&self) -> bool {
        self.dim >= 2 && self.dirs.len() >= 4
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit() {
        for d in 1..=6 {
            let set = DirectionSet::<f64>::new(d, 64, 7);
            for u in set.directions() {
                assert_eq!(u.len(), d);
                assert!((u.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn planar_first_half_is_equispaced() {
        let set = DirectionSet::<f64>::new(2, 8, 1);
        let mut angles: Vec<f64> = set.directions()[..4].iter().map(|u| u[1].atan2(u[0]).rem_euclid(std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        for w in angles.windows(2) {
            assert!((w[1] - w[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        }
    }

    #[test]
    fn same_seed_same_set() {
        let a = DirectionSet::<f64>::new(3, 32, 5);
        let b = DirectionSet::<f64>::new(3, 32, 5);
        assert_eq!(a.directions(), b.directions());
    }
}
