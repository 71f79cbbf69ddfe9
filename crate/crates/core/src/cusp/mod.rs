//! Standard and bent cusp models: horoballs, model groups, sections, degenerate witnesses, deep simplices and
//! shell volumes.

mod bent;
mod groups;
mod section;
mod simplex;
mod volume;
mod witness;

pub use bent::{bent_graph, standard_graph, BentDomain, CHORD_TOL};
pub use groups::{bent_group_element, bent_orbit_check, BentGroupElement, DegenerateGroupElement, DegenerateVariant, OrbitReport};
pub use section::{omega_x_section, PlaneSection};
pub use simplex::{
    cusp_simplex, depth_threshold, length_w1, length_w2, length_w3, length_w_perp, simplex_vectors, simplex_volume_formula,
    CuspSimplex, DeepPoint, DepthThreshold,
};
pub use volume::{
    cusp_volume_estimate, default_first_shell, standard_shell_volume_exact, CuspModel, HoroDensity, LatticeCell, LevelProfile,
    ModelKind, ShellEstimate, ShellRegion, ShellSeries,
};
pub use witness::{degenerate_affine_line_witness, AffineLineWitness, WitnessTerm};

use crate::hilbert::Paraboloid;
use crate::scalar::Scalar;

/// Standard horoball of level `c`, the epigraph of `f_c`.
pub fn standard_horoball<S: Scalar>(d: usize, c: S) -> Paraboloid<S> {
    Paraboloid::new(d, c)
}

/// Bent horoball of level `c`, the epigraph of `g_c`.
pub fn bent_horoball<S: Scalar>(d: usize, c: S) -> crate::Result<BentDomain<S>> {
    BentDomain::new(d, c)
}
