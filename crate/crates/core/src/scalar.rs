//! Scalar abstraction shared by every geometric routine.

use std::sync::atomic::{AtomicU64, Ordering};

use nalgebra::RealField;
use num_traits::{FloatConst, FromPrimitive, ToPrimitive};

/// Real field the geometry is generic over (`f32` or `f64`).
pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + FloatConst + Send + Sync + 'static
{
    /// Relative tolerance for projective comparisons when no override is set.
    fn default_tol() -> Self;
    /// Absolute tolerance for residuals of long matrix products.
    fn residual_tol() -> Self;

    /// Converts an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts to `f64`, mapping failures to NaN.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn infinity() -> Self;
    fn is_finite_val(self) -> bool;
}

impl Scalar for f64 {
    fn default_tol() -> f64 {
        1e-9
    }
    fn residual_tol() -> f64 {
        1e-8
    }
    fn infinity() -> f64 {
        f64::INFINITY
    }
    fn is_finite_val(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn default_tol() -> f32 {
        1e-4
    }
    fn residual_tol() -> f32 {
        1e-3
    }
    fn infinity() -> f32 {
        f32::INFINITY
    }
    fn is_finite_val(self) -> bool {
        self.is_finite()
    }
}

static TOL_OVERRIDE: AtomicU64 = AtomicU64::new(0);

/// Overrides the global comparison tolerance; `None` restores the per-type default.
pub fn set_global_tolerance(tol: Option<f64>) {
    let bits = match tol {
        Some(t) if t > 0.0 && t.is_finite() => t.to_bits(),
        _ => 0,
    };
    TOL_OVERRIDE.store(bits, Ordering::Relaxed);
}

/// Current comparison tolerance for `S`.
pub fn tol<S: Scalar>() -> S {
    match TOL_OVERRIDE.load(Ordering::Relaxed) {
        0 => S::default_tol(),
        bits => S::lit(f64::from_bits(bits)),
    }
}
