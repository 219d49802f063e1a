//! Nodal sets of directional derivatives and level sets of the solution.

use serde::Serialize;

use super::marching::march_zero_set;
use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::geom::Point;

/// Which boundary an open curve endpoint terminates at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EndpointKind {
    Inner,
    Outer,
    Closed,
}

/// One connected component of the zero set of u_θ = ∇u·θ.
#[derive(Debug, Clone, Serialize)]
pub struct NodalCurve {
    pub theta: Point,
    pub points: Vec<Point>,
    pub closed: bool,
    pub endpoints: (EndpointKind, EndpointKind),
}

/// Relative snap threshold turning symmetry-axis noise into exact zeros.
const ZERO_SNAP_REL: f64 = 1e-8;

/// Zero-level curves of the directional derivative u_θ computed from the
/// nodal gradient, with endpoints labelled by their nearest boundary.
pub fn nodal_set(field: &ScalarField, theta: Point) -> Vec<NodalCurve> {
    let theta = theta.normalized();
    let grid = field.grid();
    let m = grid.interior_count();
    let mut u_theta = vec![0.0f64; m];
    let mut max_abs = 0.0f64;
    for (i, slot) in u_theta.iter_mut().enumerate() {
        *slot = field.nodal_gradient(i).dot(theta);
        max_abs = max_abs.max(slot.abs());
    }
    let snap = ZERO_SNAP_REL * max_abs;
    let curves = march_zero_set(
        grid,
        |ix, iy| grid.node_index(ix, iy).map(|i| u_theta[i]),
        snap,
    );

    let spec = &grid.spec;
    curves
        .into_iter()
        .filter(|c| c.points.len() >= 2)
        .map(|c| {
            let endpoints = if c.closed {
                (EndpointKind::Closed, EndpointKind::Closed)
            } else {
                let label = |p: Point| {
                    if spec.dist_to_inner_boundary(p) <= spec.dist_to_outer_boundary(p) {
                        EndpointKind::Inner
                    } else {
                        EndpointKind::Outer
                    }
                };
                (
                    label(*c.points.first().unwrap()),
                    label(*c.points.last().unwrap()),
                )
            };
            NodalCurve {
                theta,
                points: c.points,
                closed: c.closed,
                endpoints,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelCurve {
    pub level: f64,
    pub points: Vec<Point>,
    pub closed: bool,
}

/// Marching-squares contours of u at the given levels, each strictly inside
/// (0, max u).
pub fn level_sets(field: &ScalarField, levels: &[f64]) -> Result<Vec<LevelCurve>> {
    let max = field.max_value();
    for &level in levels {
        if !(level > 0.0 && level < max) {
            return Err(Error::LevelOutOfRange { level, max });
        }
    }
    let grid = field.grid();
    let mut out = Vec::new();
    for &level in levels {
        let curves = march_zero_set(
            grid,
            |ix, iy| field.nodal_value(ix, iy).map(|u| u - level),
            0.0,
        );
        for c in curves {
            if c.points.len() >= 2 {
                out.push(LevelCurve {
                    level,
                    points: c.points,
                    closed: c.closed,
                });
            }
        }
    }
    Ok(out)
}

/// Winding number of a closed polyline around `center` (total signed angle
/// divided by 2π, rounded).
pub fn winding_number(points: &[Point], center: Point) -> i32 {
    let mut total = 0.0f64;
    for i in 0..points.len() {
        let a = points[i].sub(center);
        let b = points[(i + 1) % points.len()].sub(center);
        total += a.cross(b).atan2(a.dot(b));
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i32
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::DomainSpec;
    use crate::grid::build_grid;
    use crate::nonlinearity::Nonlinearity;
    use crate::solver::solve;
    use std::sync::Arc;

    fn eccentric_field() -> ScalarField {
        let spec = DomainSpec::EccentricAnnulus {
            a: 0.3,
            r: 0.2,
            big_r: 0.8,
        };
        let grid = Arc::new(build_grid(&spec, 96).unwrap());
        solve(&grid, &Nonlinearity::constant(1.0), 1e-10).unwrap()
    }

    #[test]
    fn vertical_theta_recovers_the_symmetry_axis() {
        let field = eccentric_field();
        let curves = nodal_set(&field, Point::new(0.0, 1.0));
        // the x-axis sections of the domain (left and right of the hole)
        // must appear among the curves
        let mut axis_span = 0.0f64;
        for c in &curves {
            if c.points.iter().all(|p| p.y.abs() < 1e-9) {
                let xs: Vec<f64> = c.points.iter().map(|p| p.x).collect();
                let span = xs.iter().cloned().fold(f64::MIN, f64::max)
                    - xs.iter().cloned().fold(f64::MAX, f64::min);
                axis_span += span;
            }
        }
        // total axis length inside the domain is (0.8-0.5) + (0.1+0.8) = 1.2
        assert!(axis_span > 1.0, "axis span {axis_span}");
    }

    #[test]
    fn horizontal_theta_avoids_the_inner_vertical_line() {
        // nodal set of u_x must not cross x = a inside the domain
        let field = eccentric_field();
        let curves = nodal_set(&field, Point::new(1.0, 0.0));
        assert!(!curves.is_empty());
        for c in &curves {
            for w in c.points.windows(2) {
                let (x0, x1) = (w[0].x - 0.3, w[1].x - 0.3);
                assert!(
                    !(x0 * x1 < 0.0 && x0.abs() > 1e-9 && x1.abs() > 1e-9),
                    "segment crosses x=0.3: {w:?}"
                );
            }
        }
    }

    #[test]
    fn open_nodal_curves_end_near_both_boundaries() {
        let field = eccentric_field();
        let h = field.grid().h;
        let spec = &field.grid().spec;
        for k in 0..8 {
            let ang = std::f64::consts::PI * k as f64 / 8.0;
            let curves = nodal_set(&field, Point::new(ang.cos(), ang.sin()));
            for c in curves.iter().filter(|c| !c.closed) {
                for p in [c.points.first().unwrap(), c.points.last().unwrap()] {
                    let d = spec
                        .dist_to_inner_boundary(*p)
                        .min(spec.dist_to_outer_boundary(*p));
                    assert!(d <= 2.0 * h, "endpoint {p:?} at distance {d}");
                }
            }
        }
    }

    #[test]
    fn level_set_of_concentric_solution_gives_two_circles() {
        let spec = DomainSpec::ConcentricAnnulus { r0: 1.0, big_r0: 2.0 };
        let grid = Arc::new(build_grid(&spec, 128).unwrap());
        let field = solve(&grid, &Nonlinearity::constant(1.0), 1e-10).unwrap();
        let level = 0.5 * field.max_value();
        let curves = level_sets(&field, &[level]).unwrap();
        assert_eq!(curves.len(), 2, "expected two circles");
        // radii solve the radial profile equation u(rho) = level
        let radial = |rho: f64| {
            let a = 3.0 / (4.0 * 2.0f64.ln());
            -rho * rho / 4.0 + a * rho.ln() + 0.25
        };
        for c in &curves {
            assert!(c.closed);
            let r_mean =
                c.points.iter().map(|p| p.norm()).sum::<f64>() / c.points.len() as f64;
            assert!(
                (radial(r_mean) - level).abs() < 5e-3,
                "mean radius {r_mean} off the level"
            );
            assert_eq!(winding_number(&c.points, Point::ORIGIN).abs(), 1);
        }
    }

    #[test]
    fn concentric_horizontal_theta_contains_the_vertical_diameter() {
        let spec = DomainSpec::ConcentricAnnulus { r0: 1.0, big_r0: 2.0 };
        let grid = Arc::new(build_grid(&spec, 96).unwrap());
        let field = solve(&grid, &Nonlinearity::constant(1.0), 1e-10).unwrap();
        // u_x vanishes on x = 0 (and on the critical ring crossing it)
        let curves = nodal_set(&field, Point::new(1.0, 0.0));
        let mut axis_span = 0.0f64;
        for c in &curves {
            if c.points.iter().all(|p| p.x.abs() < 1e-9) {
                let ys: Vec<f64> = c.points.iter().map(|p| p.y).collect();
                axis_span += ys.iter().cloned().fold(f64::MIN, f64::max)
                    - ys.iter().cloned().fold(f64::MAX, f64::min);
            }
        }
        // both vertical diameter sections, each of length 1
        assert!(axis_span > 1.6, "axis span {axis_span}");
    }

    #[test]
    fn near_peak_level_encircles_the_maximum() {
        let spec = DomainSpec::EccentricAnnulus {
            a: 0.3,
            r: 0.2,
            big_r: 0.8,
        };
        let grid = Arc::new(build_grid(&spec, 96).unwrap());
        let field = solve(&grid, &Nonlinearity::constant(1.0), 1e-10).unwrap();
        let level = 0.98 * field.max_value();
        let curves = level_sets(&field, &[level]).unwrap();
        assert!(!curves.is_empty());
        for c in &curves {
            assert!(c.closed);
            // a small loop around the maximum near (-0.29, 0)
            let cx = c.points.iter().map(|p| p.x).sum::<f64>() / c.points.len() as f64;
            assert!((cx + 0.29).abs() < 0.1, "loop center x = {cx}");
            assert_eq!(winding_number(&c.points, Point::new(cx, 0.0)).abs(), 1);
        }
    }

    #[test]
    fn out_of_range_level_is_rejected() {
        let spec = DomainSpec::ConcentricAnnulus { r0: 1.0, big_r0: 2.0 };
        let grid = Arc::new(build_grid(&spec, 48).unwrap());
        let field = solve(&grid, &Nonlinearity::constant(1.0), 1e-10).unwrap();
        assert!(matches!(
            level_sets(&field, &[2.0 * field.max_value()]),
            Err(Error::LevelOutOfRange { .. })
        ));
        assert!(level_sets(&field, &[-0.1]).is_err());
    }
}
