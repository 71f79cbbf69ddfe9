//! Bending deformations of finite volume hyperbolic manifolds: projective and Hilbert geometry, the standard
//! and bent cusp models, cusp classification and Busemann volume estimates.
//!
//! Every routine is generic over [`Scalar`] (`f32` or `f64`); the aliases below fix the double precision
//! instantiation used by the command line tool.

pub mod bending;
pub mod classify;
pub mod config;
pub mod cusp;
pub mod error;
pub mod hilbert;
pub mod hyperbolic;
pub mod projective;
pub mod scalar;

pub use error::{Error, Result};
pub use projective::{
    apply_map, cross_ratio, line_through, AffinePatch, Membership, ProjectiveHyperplane, ProjectiveLine,
    ProjectiveMap, ProjectivePoint, SpherePoint,
};
pub use scalar::{set_global_tolerance, tol, Scalar};

pub type PointF64 = ProjectivePoint<f64>;
pub type PointF32 = ProjectivePoint<f32>;
pub type MapF64 = ProjectiveMap<f64>;
pub type MapF32 = ProjectiveMap<f32>;
