//! Numerical replay of the moving-plane and moving-sphere arguments.
//!
//! The difference fields are evaluated pointwise from the single solved
//! field: w_λ(p) = u(p) - u(p_λ) for the plane reflection and
//! ψ_λ(p) = u(p) - u(p^λ) for the sphere inversion. Both are expected to
//! stay negative inside the prescribed sweep intervals.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geom::Point;

/// Fraction of inverted points allowed to leave the domain before the
/// sphere difference is declared out of range.
const OUTSIDE_LIMIT: f64 = 0.01;
/// Violation tolerance relative to max|u|: differences more positive than
/// this count as sign violations, anything smaller is interpolation noise.
const VIOLATION_REL: f64 = 1e-7;

/// Expected sign of the difference field over the reflected region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedSign {
    Negative,
    Positive,
}

/// Sign pattern of the normal derivative along the reflection interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalDerivativeSign {
    /// Strictly one-signed at every sampled interface point.
    Strict,
    /// Mixed or vanishing (e.g. the interface is a symmetry axis).
    Indeterminate,
    /// Wrong strict sign somewhere.
    Violated,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReflectionReport {
    pub lambda: f64,
    pub half_id: String,
    pub min_diff: f64,
    pub max_diff: f64,
    pub violations: usize,
    pub n_pairs: usize,
    pub n_outside: usize,
    pub boundary_normal_sign: NormalDerivativeSign,
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Sweep {
    pub reports: Vec<ReflectionReport>,
    pub first_violation: Option<f64>,
}

/// Difference field across the plane {p·normal = offset} on the side
/// p·normal > offset, aggregated over interior nodes whose mirror image is
/// sampleable.
pub fn plane_difference(
    field: &ScalarField,
    normal: Point,
    offset: f64,
    expected: ExpectedSign,
) -> Result<ReflectionReport> {
    let normal = normal.normalized();
    let grid = field.grid();
    let tol = VIOLATION_REL * field.max_abs();

    let mut min_diff = f64::MAX;
    let mut max_diff = f64::MIN;
    let mut n_pairs = 0usize;
    let mut n_outside = 0usize;
    let mut violations = 0usize;
    for i in 0..grid.interior_count() {
        let p = grid.unknown_point(i);
        let side = p.dot(normal) - offset;
        if side <= 0.0 {
            continue;
        }
        let mirror = p.sub(normal.scale(2.0 * side));
        match field.sample(mirror) {
            Ok(um) => {
                let w = field.values()[i] - um;
                min_diff = min_diff.min(w);
                max_diff = max_diff.max(w);
                n_pairs += 1;
                let bad = match expected {
                    ExpectedSign::Negative => w > tol,
                    ExpectedSign::Positive => w < -tol,
                };
                if bad {
                    violations += 1;
                }
            }
            Err(_) => n_outside += 1,
        }
    }
    if n_pairs == 0 {
        return Err(Error::EmptyRegion);
    }

    // Hopf sign on T_λ: u must strictly decrease into the swept side when
    // w is expected negative there.
    let along = normal.perp();
    let anchor = normal.scale(offset);
    let diam = grid.bbox.width().max(grid.bbox.height());
    let boundary_normal_sign = interface_normal_sign(
        field,
        |s| (anchor.add(along.scale(diam * (2.0 * s - 1.0))), normal),
        expected == ExpectedSign::Negative,
    );

    Ok(ReflectionReport {
        lambda: offset,
        half_id: format!("n=({:.3},{:.3}) side+", normal.x, normal.y),
        min_diff,
        max_diff,
        violations,
        n_pairs,
        n_outside,
        boundary_normal_sign,
        flagged: violations > 0,
    })
}

/// Difference field under the Kelvin inversion p -> center + λ²(p-center)/|p-center|²
/// over interior nodes in the band inner_radius < |p - center| < λ.
pub fn sphere_difference(
    field: &ScalarField,
    center: Point,
    lambda: f64,
    expected: ExpectedSign,
) -> Result<ReflectionReport> {
    let (report, fraction) = sphere_difference_raw(field, center, lambda, expected)?;
    if fraction > OUTSIDE_LIMIT {
        return Err(Error::InvertedPointOutside { lambda, fraction });
    }
    Ok(report)
}

fn sphere_difference_raw(
    field: &ScalarField,
    center: Point,
    lambda: f64,
    expected: ExpectedSign,
) -> Result<(ReflectionReport, f64)> {
    let grid = field.grid();
    let inner_radius = grid
        .spec
        .inner_radius()
        .ok_or(Error::UnsupportedVariant {
            variant: grid.spec.variant_name(),
            operation: "sphere_difference",
        })?;
    let tol = VIOLATION_REL * field.max_abs();

    let mut min_diff = f64::MAX;
    let mut max_diff = f64::MIN;
    let mut n_pairs = 0usize;
    let mut n_outside = 0usize;
    let mut violations = 0usize;
    let mut candidates = 0usize;
    for i in 0..grid.interior_count() {
        let p = grid.unknown_point(i);
        let d = p.sub(center);
        let rho = d.norm();
        if rho <= inner_radius || rho >= lambda {
            continue;
        }
        candidates += 1;
        let inverted = center.add(d.scale(lambda * lambda / (rho * rho)));
        match field.sample(inverted) {
            Ok(ui) => {
                let psi = field.values()[i] - ui;
                min_diff = min_diff.min(psi);
                max_diff = max_diff.max(psi);
                n_pairs += 1;
                let bad = match expected {
                    ExpectedSign::Negative => psi > tol,
                    ExpectedSign::Positive => psi < -tol,
                };
                if bad {
                    violations += 1;
                }
            }
            Err(_) => n_outside += 1,
        }
    }
    if candidates == 0 {
        return Err(Error::EmptyRegion);
    }
    let fraction = n_outside as f64 / candidates as f64;

    // Hopf sign on |p - center| = λ: u must strictly increase outward when
    // ψ is expected negative in the band.
    let boundary_normal_sign = interface_normal_sign(
        field,
        |s| {
            let ang = 2.0 * std::f64::consts::PI * s;
            let dir = Point::new(ang.cos(), ang.sin());
            (center.add(dir.scale(lambda)), dir)
        },
        expected == ExpectedSign::Positive,
    );

    let flagged = violations > 0 || fraction > OUTSIDE_LIMIT;
    Ok((
        ReflectionReport {
            lambda,
            half_id: format!("sphere c=({:.3},{:.3})", center.x, center.y),
            min_diff: if n_pairs > 0 { min_diff } else { 0.0 },
            max_diff: if n_pairs > 0 { max_diff } else { 0.0 },
            violations,
            n_pairs,
            n_outside,
            boundary_normal_sign,
            flagged,
        },
        fraction,
    ))
}

/// Classifies the sign of n·∇u sampled along the reflection interface
/// (Hopf check). `param` maps a parameter in [0, 1) to an interface point
/// and the normal there; out-of-stencil samples are skipped. When
/// `expect_negative`, any strictly positive sample is a violation, and vice
/// versa.
fn interface_normal_sign(
    field: &ScalarField,
    param: impl Fn(f64) -> (Point, Point),
    expect_negative: bool,
) -> NormalDerivativeSign {
    let grid = field.grid();
    let tol = 1e-7 * field.max_abs() / grid.spec.min_boundary_gap();
    let mut expected = 0usize;
    let mut wrong = 0usize;
    let samples = 256;
    for k in 0..samples {
        let (p, normal) = param(k as f64 / samples as f64);
        if let Ok(g) = field.gradient(p) {
            let dn = g.dot(normal) * if expect_negative { -1.0 } else { 1.0 };
            if dn > tol {
                expected += 1;
            } else if dn < -tol {
                wrong += 1;
            }
        }
    }
    match (expected, wrong) {
        (_, w) if w > 0 => NormalDerivativeSign::Violated,
        (0, _) => NormalDerivativeSign::Indeterminate,
        _ => NormalDerivativeSign::Strict,
    }
}

/// Uniform λ sweep of plane differences over [lo, hi) along `normal`.
pub fn sweep_plane(
    field: &ScalarField,
    normal: Point,
    lambda_range: (f64, f64),
    steps: usize,
    expected: ExpectedSign,
) -> Result<Sweep> {
    assert!(steps >= 2, "sweep needs at least two steps");
    let (lo, hi) = lambda_range;
    let mut reports = Vec::with_capacity(steps);
    for k in 0..steps {
        let lambda = lo + (hi - lo) * k as f64 / steps as f64;
        reports.push(plane_difference(field, normal, lambda, expected)?);
    }
    Ok(summarize(reports))
}

/// Uniform λ sweep of sphere differences over (lo, hi]. Per-λ inversion
/// overflows (too many points landing outside Ω) flag the report instead of
/// aborting the sweep.
pub fn sweep_sphere(
    field: &ScalarField,
    center: Point,
    lambda_range: (f64, f64),
    steps: usize,
    expected: ExpectedSign,
) -> Result<Sweep> {
    assert!(steps >= 2, "sweep needs at least two steps");
    let (lo, hi) = lambda_range;
    let mut reports = Vec::with_capacity(steps);
    for k in 0..steps {
        let lambda = lo + (hi - lo) * (k + 1) as f64 / steps as f64;
        let (report, _) = sphere_difference_raw(field, center, lambda, expected)?;
        reports.push(report);
    }
    Ok(summarize(reports))
}

fn summarize(reports: Vec<ReflectionReport>) -> Sweep {
    let first_violation = reports
        .iter()
        .find(|r| r.flagged)
        .map(|r| r.lambda);
    Sweep {
        reports,
        first_violation,
    }
}
