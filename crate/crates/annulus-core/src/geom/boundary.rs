//! Boundary sampling for report and plot export.

use std::f64::consts::PI;

use super::spec::polygon_vertices;
use super::{DomainSpec, Point};

/// Samples both boundaries as closed counterclockwise polylines
/// (inner, outer). Spacing is at most perimeter/n along each curve and
/// polygon corners appear as exact vertices.
pub fn boundary_polylines(spec: &DomainSpec, n: usize) -> (Vec<Point>, Vec<Point>) {
    assert!(n >= 16, "boundary sampling needs n >= 16");
    match *spec {
        DomainSpec::ConcentricAnnulus { r0, big_r0 } => {
            (circle(Point::ORIGIN, r0, n), circle(Point::ORIGIN, big_r0, n))
        }
        DomainSpec::EccentricAnnulus { a, r, big_r } => (
            circle(Point::new(a, 0.0), r, n),
            circle(Point::ORIGIN, big_r, n),
        ),
        DomainSpec::PetalEllipse { a_in, b1, b2 } => {
            (circle(Point::ORIGIN, a_in, n), ellipse(b1, b2, n))
        }
        DomainSpec::PetalPolygon { a_in, k, rho } => {
            (circle(Point::ORIGIN, a_in, n), polygon(k, rho, n))
        }
        DomainSpec::ScaledEllipseAnnulus { b1, b2, s } => {
            (ellipse(s * b1, s * b2, n), ellipse(b1, b2, n))
        }
    }
}

fn circle(center: Point, radius: f64, n: usize) -> Vec<Point> {
    (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            Point::new(center.x + radius * t.cos(), center.y + radius * t.sin())
        })
        .collect()
}

/// Equal arc-length resampling: the parameter (not the point) is
/// interpolated from a dense sweep, so every sample lies on the curve.
fn ellipse(b1: f64, b2: f64, n: usize) -> Vec<Point> {
    let dense = 64 * n;
    let at = |t: f64| Point::new(b1 * t.cos(), b2 * t.sin());
    let mut arc = Vec::with_capacity(dense + 1);
    let mut total = 0.0;
    arc.push(0.0);
    for i in 1..=dense {
        let t0 = 2.0 * PI * (i - 1) as f64 / dense as f64;
        let t1 = 2.0 * PI * i as f64 / dense as f64;
        total += at(t1).dist(at(t0));
        arc.push(total);
    }
    let mut out = Vec::with_capacity(n);
    let mut j = 0;
    for i in 0..n {
        let target = total * i as f64 / n as f64;
        while arc[j + 1] < target {
            j += 1;
        }
        let seg = arc[j + 1] - arc[j];
        let frac = if seg > 0.0 { (target - arc[j]) / seg } else { 0.0 };
        let t = 2.0 * PI * (j as f64 + frac) / dense as f64;
        out.push(at(t));
    }
    out
}

/// Per-side uniform subdivision keeping the vertices exact.
fn polygon(k: u32, rho: f64, n: usize) -> Vec<Point> {
    let verts = polygon_vertices(k, rho);
    let per_side = (n as u32).div_ceil(k).max(1) as usize;
    let mut out = Vec::with_capacity(per_side * k as usize);
    for i in 0..k as usize {
        let a = verts[i];
        let b = verts[(i + 1) % k as usize];
        for j in 0..per_side {
            let t = j as f64 / per_side as f64;
            out.push(a.add(b.sub(a).scale(t)));
        }
    }
    out
}
