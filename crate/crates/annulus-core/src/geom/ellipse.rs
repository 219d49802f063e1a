//! Closest-point projection onto an axis-aligned ellipse.

use super::Point;

/// Projects points onto the ellipse x²/b1² + y²/b2² = 1.
///
/// The closest point is found as the root of the orthogonality condition
/// on the parametric angle t, solved by Newton iteration safeguarded by
/// bisection on [0, π/2] (the query is folded into the first quadrant).
#[derive(Debug, Clone, Copy)]
pub struct EllipseProjection {
    b1: f64,
    b2: f64,
}

impl EllipseProjection {
    const TOL: f64 = 1e-12;
    const MAX_ITER: usize = 50;

    pub fn new(b1: f64, b2: f64) -> Self {
        EllipseProjection { b1, b2 }
    }

    /// Orthogonality residual: (p - q(t)) · q'(t) with q(t) = (b1 cos t, b2 sin t).
    fn g(&self, t: f64, x: f64, y: f64) -> f64 {
        let (s, c) = t.sin_cos();
        (self.b1 * self.b1 - self.b2 * self.b2) * c * s - x * self.b1 * s + y * self.b2 * c
    }

    fn g_prime(&self, t: f64, x: f64, y: f64) -> f64 {
        let (s, c) = t.sin_cos();
        (self.b1 * self.b1 - self.b2 * self.b2) * (c * c - s * s) - x * self.b1 * c
            - y * self.b2 * s
    }

    /// Root of g on [0, π/2] for first-quadrant queries with x > 0, y > 0.
    /// g(0) = y·b2 > 0 and g(π/2) = -x·b1 < 0 bracket the root.
    fn solve_quadrant(&self, x: f64, y: f64) -> f64 {
        let mut lo = 0.0_f64;
        let mut hi = std::f64::consts::FRAC_PI_2;
        let mut t = y.atan2(x).clamp(lo, hi); // start near the polar angle
        for _ in 0..Self::MAX_ITER {
            let gt = self.g(t, x, y);
            if gt > 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            if hi - lo < Self::TOL {
                break;
            }
            let dg = self.g_prime(t, x, y);
            let mut next = if dg != 0.0 { t - gt / dg } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            t = next;
        }
        0.5 * (lo + hi)
    }

    /// Closest point on the ellipse to `p`.
    pub fn project(&self, p: Point) -> Point {
        let sx = if p.x < 0.0 { -1.0 } else { 1.0 };
        let sy = if p.y < 0.0 { -1.0 } else { 1.0 };
        let (x, y) = (p.x.abs(), p.y.abs());

        let q = if y == 0.0 {
            // On the major axis the interior root can branch off-axis.
            let xc = (self.b1 * self.b1 - self.b2 * self.b2) / self.b1;
            if x * self.b1 < self.b1 * self.b1 - self.b2 * self.b2 {
                let c = x / xc;
                Point::new(self.b1 * c, self.b2 * (1.0 - c * c).max(0.0).sqrt())
            } else {
                Point::new(self.b1, 0.0)
            }
        } else if x == 0.0 {
            let yc = (self.b2 * self.b2 - self.b1 * self.b1) / self.b2;
            if yc > 0.0 && y * self.b2 < self.b2 * self.b2 - self.b1 * self.b1 {
                let s = y / yc;
                Point::new(self.b1 * (1.0 - s * s).max(0.0).sqrt(), self.b2 * s)
            } else {
                Point::new(0.0, self.b2)
            }
        } else {
            let t = self.solve_quadrant(x, y);
            let (s, c) = t.sin_cos();
            Point::new(self.b1 * c, self.b2 * s)
        };
        Point::new(q.x * sx, q.y * sy)
    }

    pub fn is_inside(&self, p: Point) -> bool {
        (p.x / self.b1).powi(2) + (p.y / self.b2).powi(2) < 1.0
    }

    /// Distance to the ellipse curve, negative inside.
    pub fn signed_distance(&self, p: Point) -> f64 {
        let d = p.dist(self.project(p));
        if self.is_inside(p) {
            -d
        } else {
            d
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertex_projection() {
        let e = EllipseProjection::new(6.0, 4.0);
        let q = e.project(Point::new(0.0, 5.0));
        assert!((q.x).abs() < 1e-10 && (q.y - 4.0).abs() < 1e-10);
        assert!((e.signed_distance(Point::new(0.0, 5.0)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn circle_degenerates_to_radius() {
        let e = EllipseProjection::new(2.0, 2.0);
        for k in 0..16 {
            let ang = 0.4 * k as f64;
            let p = Point::new(3.0 * ang.cos(), 3.0 * ang.sin());
            assert!((e.signed_distance(p) - 1.0).abs() < 1e-10, "angle {ang}");
        }
    }

    #[test]
    fn projected_point_is_on_ellipse_and_orthogonal() {
        let e = EllipseProjection::new(6.0, 4.0);
        let samples = [
            Point::new(2.0, 0.1),
            Point::new(0.3, 0.2),
            Point::new(-5.0, 3.0),
            Point::new(7.0, -1.0),
            Point::new(1.0, -3.9),
        ];
        for p in samples {
            let q = e.project(p);
            let on = (q.x / 6.0).powi(2) + (q.y / 4.0).powi(2);
            assert!((on - 1.0).abs() < 1e-9, "{p:?} -> {q:?}");
            // p - q parallel to the outward normal (q.x/b1², q.y/b2²)
            let n = Point::new(q.x / 36.0, q.y / 16.0);
            let cross = p.sub(q).cross(n);
            assert!(cross.abs() < 1e-8 * p.sub(q).norm().max(1.0), "{p:?}");
        }
    }

    #[test]
    fn interior_axis_point_takes_off_axis_branch() {
        // For x inside the evolute the nearest point leaves the major axis.
        let e = EllipseProjection::new(6.0, 4.0);
        let p = Point::new(0.6, 0.0);
        let q = e.project(p);
        assert!(q.y > 0.0);
        // brute-force check
        let mut best = f64::MAX;
        for k in 0..200_000 {
            let t = std::f64::consts::PI * (k as f64) / 200_000.0;
            let c = Point::new(6.0 * t.cos(), 4.0 * t.sin());
            best = best.min(p.dist(c));
        }
        assert!((p.dist(q) - best).abs() < 1e-8);
    }
}
