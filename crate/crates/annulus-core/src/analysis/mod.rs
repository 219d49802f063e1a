//! Critical points of the solved field: detection, classification, per-axis
//! counting, Morse balance, and nodal/level set extraction.

mod marching;
mod nodal;

pub use marching::MarchedCurve;
pub use nodal::{level_sets, nodal_set, winding_number, EndpointKind, LevelCurve, NodalCurve};

use serde::Serialize;

use crate::field::ScalarField;
use crate::geom::{DomainSpec, Point, SymmetryAxis};

/// Relative floor (vs max nodal |∇u|) under which a gradient sample counts
/// as near-critical for ring detection.
const RING_TOL_REL: f64 = 1e-3;
/// Default gradient acceptance tolerance relative to max nodal |∇u|.
const TAU_G_REL: f64 = 1e-8;
/// Hessian degeneracy threshold relative to max|u| / gap^2.
const TAU_H_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Maximum,
    Saddle,
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalPoint {
    pub location: Point,
    pub kind: CriticalKind,
    /// |∇u| re-evaluated at the refined location.
    pub grad_norm: f64,
    /// Ordered Hessian eigenvalues (λ1 <= λ2).
    pub hessian_eigs: (f64, f64),
    /// Index into the domain's symmetry axes with the signed coordinate
    /// along it; filled by [`count_by_axis`].
    pub on_axis: Option<AxisPlacement>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct AxisPlacement {
    pub axis: usize,
    pub coordinate: f64,
}

/// A one-dimensional connected component of near-critical points, reported
/// when the critical set is a circle rather than isolated points.
#[derive(Debug, Clone, Serialize)]
pub struct CriticalRing {
    pub center: Point,
    pub radius: f64,
    pub radius_spread: f64,
    pub sample_count: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriticalSet {
    pub points: Vec<CriticalPoint>,
    pub ring: Option<CriticalRing>,
    /// Diameter of the largest merge cluster behind a reported point.
    pub max_cluster_diameter: f64,
}

/// Hessian degeneracy threshold for this field's curvature scale.
pub fn tau_hessian(field: &ScalarField) -> f64 {
    let gap = field.grid().spec.min_boundary_gap();
    TAU_H_REL * field.max_abs() / (gap * gap)
}

/// Classification by Hessian eigenvalue signs against a threshold.
fn classify_eigs(l1: f64, l2: f64, tau_h: f64) -> CriticalKind {
    if l2 < -tau_h {
        CriticalKind::Maximum
    } else if l1 < -tau_h && l2 > tau_h {
        CriticalKind::Saddle
    } else {
        CriticalKind::Degenerate
    }
}

/// Kind and ordered Hessian eigenvalues at an interior point.
pub fn classify(field: &ScalarField, p: Point) -> crate::Result<(CriticalKind, (f64, f64))> {
    let (uxx, uxy, uyy) = field.hessian(p)?;
    let tr = uxx + uyy;
    let disc = ((uxx - uyy).powi(2) + 4.0 * uxy * uxy).sqrt();
    let eigs = ((tr - disc) / 2.0, (tr + disc) / 2.0);
    Ok((classify_eigs(eigs.0, eigs.1, tau_hessian(field)), eigs))
}

/// Gradient of the interpolated field; thin re-export kept next to the other
/// pointwise analysis queries.
pub fn gradient(field: &ScalarField, p: Point) -> crate::Result<Point> {
    field.gradient(p)
}

/// Crossing samples of one gradient component's zero line inside a cell,
/// with the magnitude of the other component there: the building block for
/// near-critical cell detection.
fn cell_crossings(
    corners: &[Point; 4],
    gx: &[f64; 4],
    gy: &[f64; 4],
) -> impl Iterator<Item = (Point, f64)> {
    let mut out: Vec<(Point, f64)> = Vec::new();
    let edges = [(0usize, 1usize), (1, 2), (3, 2), (0, 3)];
    for &(a, b) in &edges {
        for (this, other) in [(gx, gy), (gy, gx)] {
            let (va, vb) = (this[a], this[b]);
            if va * vb < 0.0 {
                let t = va / (va - vb);
                let p = corners[a].add(corners[b].sub(corners[a]).scale(t));
                let w = other[a] + (other[b] - other[a]) * t;
                out.push((p, w.abs()));
            }
        }
    }
    out.into_iter()
}

/// Finds, refines and classifies the critical points of a solved field.
///
/// Cells where both interpolated gradient components change sign seed a
/// 2D Newton iteration on the gradient; accepted roots (|∇u| < τ_g) are
/// merged within 2h and classified. When the near-critical set closes into
/// a ring around the interior boundary (the rotationally symmetric case),
/// a single [`CriticalRing`] is reported instead of points.
pub fn find_critical_points(field: &ScalarField, tau_g: Option<f64>) -> CriticalSet {
    let grid = field.grid();
    let h = grid.h;
    let max_grad = field.max_gradient_norm();
    let tau_g = tau_g.unwrap_or(TAU_G_REL * max_grad);
    let ring_tol = RING_TOL_REL * max_grad;

    // nodal gradients on the lattice
    let m = grid.interior_count();
    let mut gx = vec![f64::NAN; m];
    let mut gy = vec![f64::NAN; m];
    for i in 0..m {
        let g = field.nodal_gradient(i);
        gx[i] = g.x;
        gy[i] = g.y;
    }
    let node_g = |ix: usize, iy: usize| -> Option<(f64, f64)> {
        grid.node_index(ix, iy).map(|i| (gx[i], gy[i]))
    };

    let mut near_critical: Vec<Point> = Vec::new();
    let mut seeds: Vec<Point> = Vec::new();

    for iy in 0..grid.ny() - 1 {
        for ix in 0..grid.nx() - 1 {
            let idx = [
                (ix, iy),
                (ix + 1, iy),
                (ix + 1, iy + 1),
                (ix, iy + 1),
            ];
            let mut cgx = [0.0f64; 4];
            let mut cgy = [0.0f64; 4];
            let mut corners = [Point::ORIGIN; 4];
            let mut ok = true;
            for (k, &(cx, cy)) in idx.iter().enumerate() {
                match node_g(cx, cy) {
                    Some((vx, vy)) => {
                        cgx[k] = vx;
                        cgy[k] = vy;
                        corners[k] = grid.node_point(cx, cy);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            for (p, w) in cell_crossings(&corners, &cgx, &cgy) {
                if w < ring_tol {
                    near_critical.push(p);
                }
            }
            let sign_change = |v: &[f64; 4]| {
                let min = v.iter().cloned().fold(f64::MAX, f64::min);
                let max = v.iter().cloned().fold(f64::MIN, f64::max);
                min <= 0.0 && max >= 0.0
            };
            if sign_change(&cgx) && sign_change(&cgy) {
                seeds.push(Point::new(
                    corners[0].x + 0.5 * h,
                    corners[0].y + 0.5 * h,
                ));
            }
        }
    }

    if let Some(ring) = detect_ring(&near_critical, h) {
        return CriticalSet {
            points: Vec::new(),
            ring: Some(ring),
            max_cluster_diameter: 0.0,
        };
    }

    // Newton refinement on the interpolated gradient, polished well below
    // the acceptance tolerance so re-evaluation is never marginal
    let polish = 1e-4 * tau_g;
    let mut accepted: Vec<Point> = Vec::new();
    'seed: for seed in seeds {
        let mut p = seed;
        let mut best = (p, f64::MAX);
        for _ in 0..40 {
            let Ok(g) = field.gradient(p) else { continue 'seed };
            let norm = g.norm();
            if norm < best.1 {
                best = (p, norm);
            }
            if norm < polish {
                break;
            }
            let Ok((uxx, uxy, uyy)) = field.hessian(p) else { continue 'seed };
            let det = uxx * uyy - uxy * uxy;
            if det.abs() < 1e-300 {
                continue 'seed;
            }
            let mut dx = -(uyy * g.x - uxy * g.y) / det;
            let mut dy = -(-uxy * g.x + uxx * g.y) / det;
            let step = dx.hypot(dy);
            if step > 1.5 * h {
                let shrink = 1.5 * h / step;
                dx *= shrink;
                dy *= shrink;
            }
            p = Point::new(p.x + dx, p.y + dy);
            if p.dist(seed) > 5.0 * h {
                continue 'seed;
            }
        }
        if best.1 < tau_g {
            accepted.push(best.0);
        }
    }

    // cusp guard: discard hits near polygon corners
    if let DomainSpec::PetalPolygon { k, rho, .. } = grid.spec {
        let verts = crate::geom::polygon_vertices(k, rho);
        accepted.retain(|p| verts.iter().all(|v| p.dist(*v) > 2.0 * h));
    }

    // merge within 2h and classify cluster centroids
    let (centroids, max_cluster_diameter) = merge_clusters(&accepted, 2.0 * h);
    let mut points = Vec::new();
    for c in centroids {
        let Ok(g) = field.gradient(c) else { continue };
        let Ok((kind, eigs)) = classify(field, c) else { continue };
        points.push(CriticalPoint {
            location: c,
            kind,
            grad_norm: g.norm(),
            hessian_eigs: eigs,
            on_axis: None,
        });
    }
    points.sort_by(|a, b| {
        (a.location.x, a.location.y)
            .partial_cmp(&(b.location.x, b.location.y))
            .unwrap()
    });

    CriticalSet {
        points,
        ring: None,
        max_cluster_diameter,
    }
}

/// Ring test: many near-critical samples forming a closed chain of nearly
/// constant radius (gaps and spread under 3h, radius well above the lattice
/// scale).
fn detect_ring(samples: &[Point], h: f64) -> Option<CriticalRing> {
    if samples.len() <= 20 {
        return None;
    }
    let n = samples.len() as f64;
    let centroid = samples
        .iter()
        .fold(Point::ORIGIN, |acc, p| acc.add(*p))
        .scale(1.0 / n);
    let radii: Vec<f64> = samples.iter().map(|p| p.dist(centroid)).collect();
    let r_mean = radii.iter().sum::<f64>() / n;
    let r_min = radii.iter().cloned().fold(f64::MAX, f64::min);
    let r_max = radii.iter().cloned().fold(f64::MIN, f64::max);
    if r_max - r_min > 3.0 * h || r_mean < 10.0 * h {
        return None;
    }
    let mut angles: Vec<(f64, Point)> = samples
        .iter()
        .map(|p| (p.sub(centroid).angle(), *p))
        .collect();
    angles.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    for w in angles.windows(2) {
        if w[0].1.dist(w[1].1) > 3.0 * h {
            return None;
        }
    }
    let wrap = angles[angles.len() - 1].1.dist(angles[0].1);
    if wrap > 3.0 * h {
        return None;
    }
    Some(CriticalRing {
        center: centroid,
        radius: r_mean,
        radius_spread: r_max - r_min,
        sample_count: samples.len(),
    })
}

/// Union-find clustering with link radius `radius`; returns centroids and
/// the largest cluster diameter.
fn merge_clusters(points: &[Point], radius: f64) -> (Vec<Point>, f64) {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i].dist(points[j]) <= radius {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut clusters: std::collections::HashMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        let root = find(&mut parent, i);
        clusters.entry(root).or_default().push(i);
    }
    let mut centroids = Vec::new();
    let mut max_diameter = 0.0f64;
    for members in clusters.values() {
        let c = members
            .iter()
            .fold(Point::ORIGIN, |acc, &i| acc.add(points[i]))
            .scale(1.0 / members.len() as f64);
        centroids.push(c);
        for (a, &i) in members.iter().enumerate() {
            for &j in &members[a + 1..] {
                max_diameter = max_diameter.max(points[i].dist(points[j]));
            }
        }
    }
    (centroids, max_diameter)
}

#[derive(Debug, Clone, Serialize)]
pub struct AxisCounts {
    pub per_axis: Vec<usize>,
    pub off_axis: usize,
}

/// Assigns each point to its nearest axis within `tau_d` (writing
/// `on_axis`) and tallies per-axis and off-axis counts.
pub fn count_by_axis(
    points: &mut [CriticalPoint],
    axes: &[SymmetryAxis],
    tau_d: f64,
) -> AxisCounts {
    let mut per_axis = vec![0usize; axes.len()];
    let mut off_axis = 0usize;
    for p in points.iter_mut() {
        let best = axes
            .iter()
            .enumerate()
            .map(|(i, ax)| (i, ax.distance(p.location)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        match best {
            Some((i, d)) if d < tau_d => {
                per_axis[i] += 1;
                p.on_axis = Some(AxisPlacement {
                    axis: i,
                    coordinate: axes[i].coordinate(p.location),
                });
            }
            _ => {
                off_axis += 1;
                p.on_axis = None;
            }
        }
    }
    AxisCounts { per_axis, off_axis }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct MorseBalance {
    pub n_max: usize,
    pub n_saddle: usize,
    pub n_degenerate: usize,
    pub balanced: bool,
}

/// Morse count balance: equal numbers of maxima and saddles and no
/// degenerate points.
pub fn morse_balance(points: &[CriticalPoint]) -> MorseBalance {
    let n_max = points.iter().filter(|p| p.kind == CriticalKind::Maximum).count();
    let n_saddle = points.iter().filter(|p| p.kind == CriticalKind::Saddle).count();
    let n_degenerate = points.len() - n_max - n_saddle;
    MorseBalance {
        n_max,
        n_saddle,
        n_degenerate,
        balanced: n_max == n_saddle && n_degenerate == 0,
    }
}

/// Number of sign alternations of u - u(center) around a circle of radius
/// `radius`: at a Morse saddle the nodal lines give at least four.
pub fn branch_crossings(field: &ScalarField, center: Point, radius: f64, samples: usize) -> usize {
    let Ok(u0) = field.sample(center) else { return 0 };
    let vals: Vec<f64> = (0..samples)
        .filter_map(|k| {
            let t = 2.0 * std::f64::consts::PI * k as f64 / samples as f64;
            let p = Point::new(center.x + radius * t.cos(), center.y + radius * t.sin());
            field.sample(p).ok().map(|v| v - u0)
        })
        .collect();
    if vals.len() < samples {
        return 0; // circle clipped by the boundary
    }
    let mut crossings = 0;
    for k in 0..vals.len() {
        let a = vals[k];
        let b = vals[(k + 1) % vals.len()];
        if a * b < 0.0 {
            crossings += 1;
        }
    }
    crossings
}
