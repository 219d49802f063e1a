//! The solved nodal field and its interpolation stack.
//!
//! Values, gradients and Hessians away from the boundary come from the C¹
//! tensor-product cubic (Catmull-Rom) interpolant on the 4x4 node block
//! around the containing cell: the interpolant reproduces nodal values and
//! quadratic fields exactly, and its gradient is continuous, so gradient
//! zeros exist wherever the solution has a critical point. Value sampling
//! falls back to a boundary-aware bilinear rule that honors the Dirichlet
//! zero at the Shortley-Weller leg intersections.

use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::grid::Grid;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SolveDiagnostics {
    pub newton_steps: usize,
    pub final_residual: f64,
}

#[derive(Debug, Clone)]
pub struct ScalarField {
    grid: Arc<Grid>,
    u: Vec<f64>,
    diagnostics: SolveDiagnostics,
    max_value: f64,
    max_abs: f64,
}

/// Catmull-Rom basis on nodes {-1, 0, 1, 2}, local coordinate in [0, 1].
#[inline]
fn catmull_rom(t: f64) -> [f64; 4] {
    [
        0.5 * (-t * t * t + 2.0 * t * t - t),
        0.5 * (3.0 * t * t * t - 5.0 * t * t + 2.0),
        0.5 * (-3.0 * t * t * t + 4.0 * t * t + t),
        0.5 * (t * t * t - t * t),
    ]
}

#[inline]
fn catmull_rom_d(t: f64) -> [f64; 4] {
    [
        0.5 * (-3.0 * t * t + 4.0 * t - 1.0),
        0.5 * (9.0 * t * t - 10.0 * t),
        0.5 * (-9.0 * t * t + 8.0 * t + 1.0),
        0.5 * (3.0 * t * t - 2.0 * t),
    ]
}

#[inline]
fn catmull_rom_dd(t: f64) -> [f64; 4] {
    [
        0.5 * (-6.0 * t + 4.0),
        0.5 * (18.0 * t - 10.0),
        0.5 * (-18.0 * t + 8.0),
        0.5 * (6.0 * t - 2.0),
    ]
}

impl ScalarField {
    pub fn new(grid: Arc<Grid>, u: Vec<f64>, diagnostics: SolveDiagnostics) -> Self {
        assert_eq!(u.len(), grid.interior_count());
        let max_value = u.iter().cloned().fold(f64::MIN, f64::max);
        let max_abs = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        ScalarField {
            grid,
            u,
            diagnostics,
            max_value,
            max_abs,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn grid_arc(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn diagnostics(&self) -> SolveDiagnostics {
        self.diagnostics
    }

    pub fn max_value(&self) -> f64 {
        self.max_value
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    pub fn nodal_value(&self, ix: usize, iy: usize) -> Option<f64> {
        self.grid.node_index(ix, iy).map(|i| self.u[i])
    }

    /// Largest nodal gradient magnitude; the scale for gradient tolerances.
    pub fn max_gradient_norm(&self) -> f64 {
        (0..self.u.len()).fold(0.0f64, |m, i| m.max(self.nodal_gradient(i).norm()))
    }

    /// Gradient at an interior node from the nonuniform 3-point formula
    /// using the node's boundary legs (Dirichlet 0 beyond short legs).
    pub fn nodal_gradient(&self, i: usize) -> Point {
        let grid = &self.grid;
        let (ix, iy) = grid.unknown_node(i);
        let l = grid.legs(i);
        let up = self.u[i];
        let h = grid.h;
        let value = |jx: i64, jy: i64, theta: f64| -> f64 {
            if theta == 1.0 {
                let idx = grid.node_index((ix as i64 + jx) as usize, (iy as i64 + jy) as usize);
                idx.map(|k| self.u[k]).unwrap_or(0.0)
            } else {
                0.0
            }
        };
        let d1 = |u_plus: f64, u_minus: f64, tp: f64, tm: f64| {
            (tm * tm * u_plus - tp * tp * u_minus + (tp * tp - tm * tm) * up)
                / (h * tp * tm * (tp + tm))
        };
        Point::new(
            d1(value(1, 0, l.east), value(-1, 0, l.west), l.east, l.west),
            d1(value(0, 1, l.north), value(0, -1, l.south), l.north, l.south),
        )
    }

    /// Containing cell clamped so the 4x4 stencil fits the lattice, plus
    /// local coordinates in [0, 1] within that cell.
    fn stencil_cell(&self, p: Point) -> (usize, usize, f64, f64) {
        let g = &self.grid;
        let fx = (p.x - g.bbox.xmin) / g.h;
        let fy = (p.y - g.bbox.ymin) / g.h;
        let cx = (fx.floor() as i64).clamp(1, g.nx() as i64 - 3) as usize;
        let cy = (fy.floor() as i64).clamp(1, g.ny() as i64 - 3) as usize;
        (cx, cy, fx - cx as f64, fy - cy as f64)
    }

    fn stencil_values(&self, cx: usize, cy: usize) -> Option<[[f64; 4]; 4]> {
        let mut v = [[0.0; 4]; 4];
        for (jy, row) in v.iter_mut().enumerate() {
            for (jx, slot) in row.iter_mut().enumerate() {
                *slot = self.u[self.grid.node_index(cx + jx - 1, cy + jy - 1)?];
            }
        }
        Some(v)
    }

    /// Interpolated value at a strictly interior point.
    pub fn sample(&self, p: Point) -> Result<f64> {
        if !self.grid.spec.contains(p) {
            return Err(Error::OutsideDomain(p));
        }
        let (cx, cy, xi, eta) = self.stencil_cell(p);
        if let Some(v) = self.stencil_values(cx, cy) {
            let wx = catmull_rom(xi);
            let wy = catmull_rom(eta);
            let mut s = 0.0;
            for jy in 0..4 {
                for jx in 0..4 {
                    s += wy[jy] * wx[jx] * v[jy][jx];
                }
            }
            Ok(s)
        } else {
            Ok(self.bilinear_near_boundary(p))
        }
    }

    /// Bilinear on the containing cell with ghost values extrapolated
    /// through the boundary legs (u = 0 at the leg intersection). Ghosts
    /// stay bounded because a node's value scales with its boundary
    /// distance.
    fn bilinear_near_boundary(&self, p: Point) -> f64 {
        let g = &self.grid;
        let (ix, iy) = g.cell_of(p);
        let o = g.node_point(ix, iy);
        let t = ((p.x - o.x) / g.h).clamp(0.0, 1.0);
        let s = ((p.y - o.y) / g.h).clamp(0.0, 1.0);
        let node_at = |jx: i64, jy: i64| -> Option<usize> {
            if jx < 0 || jy < 0 {
                return None;
            }
            g.node_index(jx as usize, jy as usize)
        };
        // corner value or leg-extrapolated ghost; (dx, dy) point at the
        // in-cell horizontal and vertical neighbors
        let corner = |jx: i64, jy: i64, dx: i64, dy: i64| -> f64 {
            if let Some(i) = node_at(jx, jy) {
                return self.u[i];
            }
            if let Some(i) = node_at(jx + dx, jy) {
                let l = g.legs(i);
                let theta = if dx > 0 { l.west } else { l.east };
                if theta < 1.0 {
                    return self.u[i] * (1.0 - 1.0 / theta);
                }
            }
            if let Some(i) = node_at(jx, jy + dy) {
                let l = g.legs(i);
                let theta = if dy > 0 { l.south } else { l.north };
                if theta < 1.0 {
                    return self.u[i] * (1.0 - 1.0 / theta);
                }
            }
            0.0
        };
        let (ix, iy) = (ix as i64, iy as i64);
        let v00 = corner(ix, iy, 1, 1);
        let v10 = corner(ix + 1, iy, -1, 1);
        let v01 = corner(ix, iy + 1, 1, -1);
        let v11 = corner(ix + 1, iy + 1, -1, -1);
        (1.0 - s) * ((1.0 - t) * v00 + t * v10) + s * ((1.0 - t) * v01 + t * v11)
    }

    /// Gradient of the C¹ interpolant. Requires the full 4x4 node block,
    /// i.e. points a couple of cells clear of the boundary.
    pub fn gradient(&self, p: Point) -> Result<Point> {
        if !self.grid.spec.contains(p) {
            return Err(Error::OutsideDomain(p));
        }
        let (cx, cy, xi, eta) = self.stencil_cell(p);
        let v = self.stencil_values(cx, cy).ok_or(Error::OutsideDomain(p))?;
        let wx = catmull_rom(xi);
        let wy = catmull_rom(eta);
        let dx = catmull_rom_d(xi);
        let dy = catmull_rom_d(eta);
        let mut gx = 0.0;
        let mut gy = 0.0;
        for jy in 0..4 {
            for jx in 0..4 {
                gx += wy[jy] * dx[jx] * v[jy][jx];
                gy += dy[jy] * wx[jx] * v[jy][jx];
            }
        }
        Ok(Point::new(gx / self.grid.h, gy / self.grid.h))
    }

    /// Hessian (uxx, uxy, uyy) of the C¹ interpolant.
    pub fn hessian(&self, p: Point) -> Result<(f64, f64, f64)> {
        if !self.grid.spec.contains(p) {
            return Err(Error::OutsideDomain(p));
        }
        let (cx, cy, xi, eta) = self.stencil_cell(p);
        let v = self.stencil_values(cx, cy).ok_or(Error::OutsideDomain(p))?;
        let wx = catmull_rom(xi);
        let wy = catmull_rom(eta);
        let dx = catmull_rom_d(xi);
        let dy = catmull_rom_d(eta);
        let ddx = catmull_rom_dd(xi);
        let ddy = catmull_rom_dd(eta);
        let h2 = self.grid.h * self.grid.h;
        let (mut uxx, mut uxy, mut uyy) = (0.0, 0.0, 0.0);
        for jy in 0..4 {
            for jx in 0..4 {
                uxx += wy[jy] * ddx[jx] * v[jy][jx];
                uyy += ddy[jy] * wx[jx] * v[jy][jx];
                uxy += dy[jy] * dx[jx] * v[jy][jx];
            }
        }
        Ok((uxx / h2, uxy / h2, uyy / h2))
    }

    /// CSV export: header `x,y,u`, one row per interior node, 17 significant
    /// digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "x,y,u")?;
        for i in 0..self.u.len() {
            let p = self.grid.unknown_point(i);
            writeln!(w, "{:.16e},{:.16e},{:.16e}", p.x, p.y, self.u[i])?;
        }
        Ok(())
    }
}
