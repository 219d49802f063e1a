//! Embedded-boundary Cartesian grid with Shortley-Weller leg data.
//!
//! Nodes live on a uniform lattice covering the domain's tight bounding box
//! inflated by two cells. Interior nodes adjacent to the boundary carry the
//! fractional distances (legs) to the boundary intersection in each of the
//! four directions, found by bisection on the signed distance.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{DomainSpec, Point, Rect};

/// Relative tolerance below which a node counts as exterior (clipping guard
/// against vanishing legs).
const CLIP_GUARD: f64 = 1e-8;

/// Fractional legs to the boundary in the four axis directions, in (0, 1].
/// A leg of 1 means the neighbor node in that direction is interior.
#[derive(Debug, Clone, Copy)]
pub struct Legs {
    pub east: f64,
    pub west: f64,
    pub north: f64,
    pub south: f64,
}

#[derive(Debug)]
pub struct Grid {
    pub spec: DomainSpec,
    /// Requested resolution (nodes across the tight box's longer side).
    pub n: usize,
    pub h: f64,
    pub bbox: Rect,
    nx: usize,
    ny: usize,
    /// Integer lattice coordinates of the (0, 0) node: every node sits at
    /// ((kx0 + ix) h, (ky0 + iy) h), which keeps mirrored coordinates
    /// bit-exact negatives of each other.
    kx0: i64,
    ky0: i64,
    /// Linear unknown index per lattice node, row-major by x then y.
    index: Vec<Option<u32>>,
    /// Lattice coordinates (ix, iy) per unknown.
    nodes: Vec<(u32, u32)>,
    legs: Vec<Legs>,
}

#[derive(Debug, Serialize)]
pub struct GridMetadata {
    pub n: usize,
    pub h: f64,
    pub bbox: Rect,
    pub interior_count: usize,
}

impl Grid {
    pub fn interior_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn node_point(&self, ix: usize, iy: usize) -> Point {
        Point::new(
            (self.kx0 + ix as i64) as f64 * self.h,
            (self.ky0 + iy as i64) as f64 * self.h,
        )
    }

    pub fn node_index(&self, ix: usize, iy: usize) -> Option<usize> {
        if ix >= self.nx || iy >= self.ny {
            return None;
        }
        self.index[iy * self.nx + ix].map(|i| i as usize)
    }

    pub fn is_interior(&self, ix: usize, iy: usize) -> bool {
        self.node_index(ix, iy).is_some()
    }

    pub fn unknown_node(&self, i: usize) -> (usize, usize) {
        let (ix, iy) = self.nodes[i];
        (ix as usize, iy as usize)
    }

    pub fn unknown_point(&self, i: usize) -> Point {
        let (ix, iy) = self.unknown_node(i);
        self.node_point(ix, iy)
    }

    pub fn legs(&self, i: usize) -> Legs {
        self.legs[i]
    }

    /// Lattice index of the mirror node across the x-axis, which is exact
    /// because the lattice is symmetrized about every mirror axis.
    pub fn mirror_y(&self, iy: usize) -> usize {
        self.ny - 1 - iy
    }

    /// Lattice index of the mirror node across the y-axis.
    pub fn mirror_x(&self, ix: usize) -> usize {
        self.nx - 1 - ix
    }

    /// Cell indices (ix, iy) such that the cell [ix, ix+1] x [iy, iy+1]
    /// contains `p`; the result is clamped to the lattice.
    pub fn cell_of(&self, p: Point) -> (usize, usize) {
        let fx = ((p.x - self.bbox.xmin) / self.h).floor();
        let fy = ((p.y - self.bbox.ymin) / self.h).floor();
        let ix = (fx.max(0.0) as usize).min(self.nx - 2);
        let iy = (fy.max(0.0) as usize).min(self.ny - 2);
        (ix, iy)
    }

    pub fn metadata(&self) -> GridMetadata {
        GridMetadata {
            n: self.n,
            h: self.h,
            bbox: self.bbox,
            interior_count: self.interior_count(),
        }
    }

    /// Deterministic FNV-1a hash over the grid geometry, used for report
    /// provenance.
    pub fn geometry_hash(&self) -> u64 {
        let mut hash: u64 = 0xcbf29ce484222325;
        let mut eat = |bytes: &[u8]| {
            for &b in bytes {
                hash ^= b as u64;
                hash = hash.wrapping_mul(0x100000001b3);
            }
        };
        eat(&self.h.to_bits().to_le_bytes());
        eat(&self.bbox.xmin.to_bits().to_le_bytes());
        eat(&self.bbox.ymin.to_bits().to_le_bytes());
        eat(&(self.nx as u64).to_le_bytes());
        eat(&(self.ny as u64).to_le_bytes());
        for &(ix, iy) in &self.nodes {
            eat(&ix.to_le_bytes());
            eat(&iy.to_le_bytes());
        }
        hash
    }
}

/// Builds the grid for a valid spec with `n` nodes across the longer side
/// of the tight bounding box.
pub fn build_grid(spec: &DomainSpec, n: usize) -> Result<Grid> {
    assert!(n >= 32, "grid resolution must be at least 32");
    let violations = spec.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidSpec(violations));
    }

    let tight = spec.tight_bbox();
    let h = tight.width().max(tight.height()) / (n - 1) as f64;

    // Symmetric axes must map lattice nodes to lattice nodes, so the lattice
    // is laid out symmetric about zero in each mirrored direction.
    let (kx0, nx) = lattice_range(tight.xmin, tight.xmax, h, spec.y_mirror_symmetric());
    let (ky0, ny) = lattice_range(tight.ymin, tight.ymax, h, spec.x_mirror_symmetric());
    let bbox = Rect::new(
        kx0 as f64 * h,
        (kx0 + nx as i64 - 1) as f64 * h,
        ky0 as f64 * h,
        (ky0 + ny as i64 - 1) as f64 * h,
    );
    let node_at = |ix: usize, iy: usize| {
        Point::new((kx0 + ix as i64) as f64 * h, (ky0 + iy as i64) as f64 * h)
    };

    let mut index = vec![None; nx * ny];
    let mut nodes = Vec::new();
    let mut sd = vec![0.0f64; nx * ny];
    // Unknowns are numbered with the shorter lattice dimension varying
    // fastest, which minimizes the band width of the discrete Laplacian.
    let mut classify = |ix: usize, iy: usize, nodes: &mut Vec<(u32, u32)>| {
        let d = spec.signed_distance(node_at(ix, iy));
        sd[iy * nx + ix] = d;
        if d < -h * CLIP_GUARD {
            index[iy * nx + ix] = Some(nodes.len() as u32);
            nodes.push((ix as u32, iy as u32));
        }
    };
    if nx <= ny {
        for iy in 0..ny {
            for ix in 0..nx {
                classify(ix, iy, &mut nodes);
            }
        }
    } else {
        for ix in 0..nx {
            for iy in 0..ny {
                classify(ix, iy, &mut nodes);
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::DegenerateDomain);
    }

    let leg_tol = 1e-12;
    let mut legs = Vec::with_capacity(nodes.len());
    for &(ix, iy) in &nodes {
        let (ix, iy) = (ix as usize, iy as usize);
        let p = node_at(ix, iy);
        let leg = |dx: f64, dy: f64, neighbor: Option<&f64>| -> f64 {
            match neighbor {
                Some(&d) if d < -h * CLIP_GUARD => 1.0,
                _ => boundary_fraction(spec, p, Point::new(dx * h, dy * h), leg_tol),
            }
        };
        legs.push(Legs {
            east: leg(1.0, 0.0, (ix + 1 < nx).then(|| &sd[iy * nx + ix + 1])),
            west: leg(-1.0, 0.0, (ix > 0).then(|| &sd[iy * nx + ix - 1])),
            north: leg(0.0, 1.0, (iy + 1 < ny).then(|| &sd[(iy + 1) * nx + ix])),
            south: leg(0.0, -1.0, (iy > 0).then(|| &sd[(iy - 1) * nx + ix])),
        });
    }

    Ok(Grid {
        spec: spec.clone(),
        n,
        h,
        bbox,
        nx,
        ny,
        kx0,
        ky0,
        index,
        nodes,
        legs,
    })
}

/// Integer lattice (multiples of h) covering [lo - 2h, hi + 2h]. When
/// `symmetric`, the index range is centered so the node set is exactly
/// invariant under negation.
fn lattice_range(lo: f64, hi: f64, h: f64, symmetric: bool) -> (i64, usize) {
    if symmetric {
        let half = (hi.abs().max(lo.abs()) / h).ceil() as i64 + 2;
        (-half, (2 * half + 1) as usize)
    } else {
        let kmin = (lo / h).floor() as i64 - 2;
        let kmax = (hi / h).ceil() as i64 + 2;
        (kmin, (kmax - kmin + 1) as usize)
    }
}

/// Fraction theta in (0, 1] of the step `dir` at which the boundary is
/// crossed, by bisection on the signed distance.
fn boundary_fraction(spec: &DomainSpec, p: Point, dir: Point, rel_tol: f64) -> f64 {
    let mut lo = 0.0f64; // inside
    let mut hi = 1.0f64; // outside (or clipped to exterior)
    let max_iter = 60;
    for _ in 0..max_iter {
        if hi - lo <= rel_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let d = spec.signed_distance(p.add(dir.scale(mid)));
        if d < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Report the outside end of the bracket so the leg never underestimates
    // the distance to the Dirichlet data.
    hi.max(CLIP_GUARD)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn node_count_matches_area() {
        let spec = DomainSpec::ConcentricAnnulus { r0: 1.0, big_r0: 2.0 };
        let grid = build_grid(&spec, 128).unwrap();
        assert!((grid.h - 4.0 / 127.0).abs() < 1e-14);
        let expected = std::f64::consts::PI * 3.0 / (grid.h * grid.h);
        let got = grid.interior_count() as f64;
        assert!(
            (got - expected).abs() < 0.05 * expected,
            "count {got} vs area estimate {expected}"
        );
    }

    #[test]
    fn interior_nodes_are_inside_with_legs() {
        let spec = DomainSpec::EccentricAnnulus {
            a: 0.3,
            r: 0.2,
            big_r: 0.8,
        };
        let grid = build_grid(&spec, 64).unwrap();
        for i in 0..grid.interior_count() {
            let p = grid.unknown_point(i);
            assert!(grid.spec.contains(p));
            let l = grid.legs(i);
            for th in [l.east, l.west, l.north, l.south] {
                assert!(th > 0.0 && th <= 1.0, "theta {th}");
            }
        }
    }

    #[test]
    fn metadata_serializes_to_the_wire_shape() {
        let spec = DomainSpec::ConcentricAnnulus { r0: 1.0, big_r0: 2.0 };
        let grid = build_grid(&spec, 48).unwrap();
        let v = serde_json::to_value(grid.metadata()).unwrap();
        let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["bbox", "h", "interior_count", "n"]);
        assert_eq!(v["n"], 48);
    }

    #[test]
    fn sub_resolution_annulus_is_degenerate() {
        let spec = DomainSpec::ConcentricAnnulus {
            r0: 1.0,
            big_r0: 1.0 + 1e-6,
        };
        assert!(matches!(build_grid(&spec, 32), Err(Error::DegenerateDomain)));
    }

    #[test]
    fn lattice_is_mirror_symmetric() {
        let spec = DomainSpec::EccentricAnnulus {
            a: 0.3,
            r: 0.2,
            big_r: 0.8,
        };
        let grid = build_grid(&spec, 48).unwrap();
        for i in 0..grid.interior_count() {
            let (ix, iy) = grid.unknown_node(i);
            let p = grid.node_point(ix, iy);
            let q = grid.node_point(ix, grid.mirror_y(iy));
            assert!((p.y + q.y).abs() < 1e-12 && (p.x - q.x).abs() < 1e-12);
            // x-mirror symmetry of the domain implies the mirrored node is interior
            assert!(grid.is_interior(ix, grid.mirror_y(iy)));
        }
    }

    #[test]
    fn legs_match_exact_circle_intersections() {
        let spec = DomainSpec::ConcentricAnnulus { r0: 1.0, big_r0: 2.0 };
        let grid = build_grid(&spec, 64).unwrap();
        for i in 0..grid.interior_count() {
            let p = grid.unknown_point(i);
            let l = grid.legs(i);
            for (dir, th) in [
                (Point::new(1.0, 0.0), l.east),
                (Point::new(-1.0, 0.0), l.west),
                (Point::new(0.0, 1.0), l.north),
                (Point::new(0.0, -1.0), l.south),
            ] {
                if th < 1.0 {
                    let q = p.add(dir.scale(th * grid.h));
                    assert!(
                        spec.signed_distance(q).abs() < 1e-10 * grid.h,
                        "leg endpoint off the boundary: {q:?}"
                    );
                }
            }
        }
    }
}
