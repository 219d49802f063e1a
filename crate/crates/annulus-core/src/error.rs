use crate::geom::Point;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("operation {operation} is not defined for variant {variant}")]
    UnsupportedVariant {
        variant: &'static str,
        operation: &'static str,
    },

    #[error("domain spec violates invariants: {0:?}")]
    InvalidSpec(Vec<String>),

    #[error("grid has no interior nodes (domain thinner than the grid spacing)")]
    DegenerateDomain,

    #[error("Newton did not converge after {iterations} steps (residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("solution violates the maximum principle (min value {min_value:.3e} with f(0) > 0)")]
    MaxPrincipleViolation { min_value: f64 },

    #[error("nonlinearity leaves f(u) >= 0 on the attained range (min f = {min_f:.3e})")]
    NonlinearityRange { min_f: f64 },

    #[error("point ({};{}) is outside the domain", .0.x, .0.y)]
    OutsideDomain(Point),

    #[error("level {level:.6e} outside (0, {max:.6e})")]
    LevelOutOfRange { level: f64, max: f64 },

    #[error("reflection region contains no node pairs")]
    EmptyRegion,

    #[error("inversion at lambda {lambda:.6} maps fraction {fraction:.4} of points outside the domain")]
    InvertedPointOutside { lambda: f64, fraction: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
