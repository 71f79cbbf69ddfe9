//! Monte Carlo Busemann volume with shard-deterministic random streams.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{busemann_density, ConvexDomain, DirectionSet};
use crate::scalar::Scalar;

/// Samples drawn by one random stream.
pub const SHARD_SIZE: u64 = 4096;

/// Estimate of a volume with its Monte Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub sample_count: u64,
    pub rng_seed: u64,
}

impl VolumeEstimate {
    pub const CSV_HEADER: &'static str = "value,stderr,samples,seed";

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.value, self.standard_error, self.sample_count, self.rng_seed)
    }
}

/// Sampling budget of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub samples: u64,
    pub seed: u64,
}

/// Integration region parametrized by the unit cube.
pub trait Region<S: Scalar>: Sync {
    /// Dimension of the parameter cube.
    fn param_dim(&self) -> usize;

    /// Chart point for cube parameters `u` and the Jacobian weight, or `None` outside the region.
    fn sample(&self, u: &[S]) -> Option<(DVector<S>, S)>;
}

/// Axis-aligned box intersected with a membership predicate.
pub struct BoxRegion<S: Scalar, F> {
    lo: DVector<S>,
    hi: DVector<S>,
    member: F,
}

impl<S: Scalar, F: Fn(&DVector<S>) -> bool + Sync> BoxRegion<S, F> {
    pub fn new(lo: DVector<S>, hi: DVector<S>, member: F) -> Self {
        Self { lo, hi, member }
    }

    pub fn box_volume(&self) -> S {
        (&self.hi - &self.lo).iter().fold(S::one(), |a, &w| a * w)
    }
}

impl<S: Scalar, F: Fn(&DVector<S>) -> bool + Sync> Region<S> for BoxRegion<S, F> {
    fn param_dim(&self) -> usize {
        self.lo.len()
    }

    fn sample(&self, u: &[S]) -> Option<(DVector<S>, S)> {
        let z = DVector::from_fn(self.lo.len(), |i, _| self.lo[i] + u[i] * (self.hi[i] - self.lo[i]));
        (self.member)(&z).then(|| (z, self.box_volume()))
    }
}

/// Density with respect to Lebesgue measure in the chart.
pub trait DensityField<S: Scalar>: Sync {
    fn density(&self, z: &DVector<S>) -> S;
}

/// Busemann density computed directly from the chord oracle.
pub struct DirectDensity<'a, S: Scalar, D: ConvexDomain<S> + ?Sized> {
    pub domain: &'a D,
    pub directions: &'a DirectionSet<S>,
}

impl<S: Scalar, D: ConvexDomain<S> + ?Sized> DensityField<S> for DirectDensity<'_, S, D> {
    fn density(&self, z: &DVector<S>) -> S {
        busemann_density(self.domain, z, self.directions).unwrap_or(S::zero())
    }
}

#[derive(Clone, Copy)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    const EMPTY: Self = Self { n: 0, mean: 0.0, m2: 0.0 };

    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.n as f64 / n as f64;
        let m2 = self.m2 + other.m2 + delta * delta * self.n as f64 * other.n as f64 / n as f64;
        Self { n, mean, m2 }
    }
}

/// Monte Carlo integral of `density` over `region`.
///
/// Shard `k` draws from the ChaCha stream `k` of `seed` and shards are merged in index order, so the result is
/// independent of thread scheduling.
pub fn integrate<S, R, F>(density: &F, region: &R, budget: Budget) -> VolumeEstimate
where
    S: Scalar,
    R: Region<S> + ?Sized,
    F: DensityField<S> + ?Sized,
{
    let m = region.param_dim();
    let shards = budget.samples.div_ceil(SHARD_SIZE);
    let partial: Vec<Moments> = (0..shards)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
            rng.set_stream(k);
            let count = SHARD_SIZE.min(budget.samples - k * SHARD_SIZE);
            let mut acc = Moments::EMPTY;
            let mut u = vec![S::zero(); m];
            for _ in 0..count {
                for ui in u.iter_mut() {
                    *ui = S::lit(rng.gen::<f64>());
                }
                let f = match region.sample(&u) {
                    Some((z, w)) => (density.density(&z) * w).to_f64_lossy(),
                    None => 0.0,
                };
                acc.push(if f.is_finite() { f } else { 0.0 });
            }
            acc
        })
        .collect();
    let total = partial.into_iter().fold(Moments::EMPTY, Moments::merge);
    let stderr = if total.n > 1 {
        (total.m2 / (total.n - 1) as f64 / total.n as f64).sqrt()
    } else {
        0.0
    };
    VolumeEstimate {
        value: total.mean,
        standard_error: stderr,
        sample_count: budget.samples,
        rng_seed: budget.seed,
    }
}

/// Busemann volume of `region ⊂ Ω` with the density computed from the chord oracle of `Ω`.
pub fn busemann_volume<S, D, R>(domain: &D, region: &R, directions: &DirectionSet<S>, budget: Budget) -> VolumeEstimate
where
    S: Scalar,
    D: ConvexDomain<S> + ?Sized,
    R: Region<S> + ?Sized,
{
    integrate(&DirectDensity { domain, directions }, region, budget)
}
