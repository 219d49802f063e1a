//! Numerical study of critical points of Δu + f(u) = 0, u = 0 on ∂Ω, on
//! planar annular domains.
//!
//! The pipeline: describe a domain ([`DomainSpec`]), discretize it on an
//! embedded-boundary grid ([`build_grid`]), solve the semilinear problem
//! ([`solve`]), then locate, classify and count critical points
//! ([`find_critical_points`]), extract nodal and level sets, and replay the
//! moving-plane / moving-sphere sign arguments ([`reflect`]).

pub mod analysis;
pub mod error;
pub mod field;
pub mod geom;
pub mod grid;
pub mod nonlinearity;
pub mod reflect;
pub mod solver;

pub use analysis::{
    count_by_axis, find_critical_points, morse_balance, AxisCounts, CriticalKind, CriticalPoint,
    CriticalRing, CriticalSet, MorseBalance,
};
pub use error::{Error, Result};
pub use field::{ScalarField, SolveDiagnostics};
pub use geom::{
    boundary_polylines, exclusion_region, symmetry_axes, AxisKind, DomainSpec, ExclusionRegion,
    Point, Rect, SymmetryAxis, SymmetryInfo,
};
pub use grid::{build_grid, Grid, GridMetadata};
pub use nonlinearity::Nonlinearity;
pub use solver::{residual, solve, solve_from, InitialGuess};
