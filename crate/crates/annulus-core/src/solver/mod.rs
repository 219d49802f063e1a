//! Newton solve of the discrete semilinear problem Δ_h u + f(u) = 0 with
//! homogeneous Dirichlet data on the embedded boundary.

mod banded;

pub use banded::{BandedLu, BandedMatrix};

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{ScalarField, SolveDiagnostics};
use crate::grid::Grid;
use crate::nonlinearity::Nonlinearity;

const MAX_NEWTON: usize = 50;
const MAX_HALVINGS: usize = 30;

/// Initial iterate for the Newton solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialGuess {
    Zero,
    /// Constant field at the comparison-principle bound f(0) * R^2 / 4,
    /// which dominates the solution.
    UpperBound,
}

/// Shortley-Weller coefficients of one row of Δ_h. Legs shorter than 1
/// point at the Dirichlet boundary and contribute no column.
struct StencilRow {
    diag: f64,
    east: Option<(usize, f64)>,
    west: Option<(usize, f64)>,
    north: Option<(usize, f64)>,
    south: Option<(usize, f64)>,
}

fn stencil_row(grid: &Grid, i: usize) -> StencilRow {
    let h2 = grid.h * grid.h;
    let l = grid.legs(i);
    let (ix, iy) = grid.unknown_node(i);
    let pair = |theta: f64, opp: f64, neighbor: Option<usize>| {
        let coeff = 2.0 / (h2 * theta * (theta + opp));
        neighbor.filter(|_| theta == 1.0).map(|n| (n, coeff))
    };
    StencilRow {
        diag: -2.0 / h2 * (1.0 / (l.east * l.west) + 1.0 / (l.north * l.south)),
        east: pair(l.east, l.west, grid.node_index(ix + 1, iy)),
        west: pair(l.west, l.east, ix.checked_sub(1).and_then(|x| grid.node_index(x, iy))),
        north: pair(l.north, l.south, grid.node_index(ix, iy + 1)),
        south: pair(l.south, l.north, iy.checked_sub(1).and_then(|y| grid.node_index(ix, y))),
    }
}

/// Max-norm of the discrete residual Δ_h u + f(u) over interior nodes.
pub fn residual(field: &ScalarField, f: &Nonlinearity) -> f64 {
    residual_vec(field.grid(), field.values(), f)
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()))
}

fn residual_vec(grid: &Grid, u: &[f64], f: &Nonlinearity) -> Vec<f64> {
    let m = grid.interior_count();
    let mut g = vec![0.0; m];
    for i in 0..m {
        let row = stencil_row(grid, i);
        let mut lap = row.diag * u[i];
        for nb in [row.east, row.west, row.north, row.south].into_iter().flatten() {
            lap += nb.1 * u[nb.0];
        }
        g[i] = lap + f.eval(u[i]);
    }
    g
}

fn band_width(grid: &Grid) -> usize {
    let m = grid.interior_count();
    let mut kl = 0usize;
    for i in 0..m {
        let row = stencil_row(grid, i);
        for nb in [row.east, row.west, row.north, row.south].into_iter().flatten() {
            kl = kl.max(nb.0.abs_diff(i));
        }
    }
    kl
}

fn assemble_jacobian(grid: &Grid, u: &[f64], f: &Nonlinearity, kl: usize) -> BandedMatrix {
    let m = grid.interior_count();
    let mut a = BandedMatrix::zeros(m, kl, kl);
    for i in 0..m {
        let row = stencil_row(grid, i);
        a.set(i, i, row.diag + f.deriv(u[i]));
        for nb in [row.east, row.west, row.north, row.south].into_iter().flatten() {
            a.set(i, nb.0, nb.1);
        }
    }
    a
}

/// Solves Δ_h u + f(u) = 0 from u ≡ 0 to the requested residual bound.
pub fn solve(grid: &Arc<Grid>, f: &Nonlinearity, tol: f64) -> Result<ScalarField> {
    solve_from(grid, f, tol, InitialGuess::Zero)
}

pub fn solve_from(
    grid: &Arc<Grid>,
    f: &Nonlinearity,
    tol: f64,
    init: InitialGuess,
) -> Result<ScalarField> {
    assert!(tol > 0.0, "residual tolerance must be positive");
    let m = grid.interior_count();
    let mut u = match init {
        InitialGuess::Zero => vec![0.0; m],
        InitialGuess::UpperBound => {
            let r = grid.bbox.width().max(grid.bbox.height()) / 2.0;
            vec![f.eval(0.0) * r * r / 4.0; m]
        }
    };

    let kl = band_width(grid);
    let mut res = inf_norm(&residual_vec(grid, &u, f));
    let mut steps = 0usize;
    while res > tol {
        if steps >= MAX_NEWTON {
            return Err(Error::NonConvergence {
                iterations: steps,
                residual: res,
            });
        }
        let mut g = residual_vec(grid, &u, f);
        for gi in &mut g {
            *gi = -*gi;
        }
        let lu = assemble_jacobian(grid, &u, f, kl)
            .factor()
            .map_err(|_| Error::NonConvergence {
                iterations: steps,
                residual: res,
            })?;
        lu.solve_in_place(&mut g);
        steps += 1;

        // damped step: halve until the residual decreases
        let mut accepted = false;
        let mut s = 1.0;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = u.iter().zip(&g).map(|(&ui, &di)| ui + s * di).collect();
            let trial_res = inf_norm(&residual_vec(grid, &trial, f));
            if trial_res < res {
                u = trial;
                res = trial_res;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if !accepted {
            return Err(Error::NonConvergence {
                iterations: steps,
                residual: res,
            });
        }
    }

    // the discrete strong maximum principle must hold when f(0) > 0
    if f.eval(0.0) > 0.0 {
        let min = u.iter().cloned().fold(f64::MAX, f64::min);
        if min <= 0.0 {
            return Err(Error::MaxPrincipleViolation { min_value: min });
        }
    }
    // AffineDecreasing must keep f >= 0 on the attained range [0, max u]
    if let Nonlinearity::AffineDecreasing { .. } = f {
        let max = u.iter().cloned().fold(0.0f64, f64::max);
        let min_f = f.eval(max);
        if min_f < 0.0 {
            return Err(Error::NonlinearityRange { min_f });
        }
    }

    Ok(ScalarField::new(
        Arc::clone(grid),
        u,
        SolveDiagnostics {
            newton_steps: steps,
            final_residual: res,
        },
    ))
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
