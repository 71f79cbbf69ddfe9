use thiserror::Error;

/// Errors raised by the geometric layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero vector has no projective class")]
    ZeroVector,
    #[error("points are not collinear (residual {residual:e})")]
    Collinearity { residual: f64 },
    #[error("degenerate cross-ratio: an endpoint coincides with an inner point")]
    DegenerateCrossRatio,
    #[error("line through coincident points")]
    DegenerateLine,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("singular matrix")]
    Singular,
    #[error("point is not in the interior of the domain")]
    Domain,
    #[error("sampled point of the inner domain lies outside the outer domain")]
    Containment,
    #[error("point lies on the boundary segment, section is degenerate")]
    DegenerateSection,
    #[error("lattice basis does not span the parameter space")]
    Lattice,
    #[error("x0 = {x0} is not deep enough: tangent length {norm} >= 1")]
    NotYetDeep { x0: f64, norm: f64 },
    #[error("bending is ill formed: {what} (residual {residual:e})")]
    IllFormedBending { what: String, residual: f64 },
    #[error("word error: {0}")]
    Word(String),
    #[error("element does not centralize the wall translations (residual {residual:e})")]
    NotInCentralizer { residual: f64 },
    #[error("pencil action reverses orientation (beta = {beta})")]
    Orientation { beta: f64 },
    #[error("no normal form conjugator: {0}")]
    NormalFormFailure(String),
    #[error("signed points must be strictly increasing in [0, 1)")]
    Order,
    #[error("horoball sandwich is unbounded on the cell")]
    SandwichFailure,
    #[error("model error: {0}")]
    Model(String),
    #[error("root finder failed to converge")]
    RootFinding,
}

pub type Result<T> = std::result::Result<T, Error>;
