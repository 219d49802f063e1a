//! The five annular domain families, their membership and distance queries,
//! and their symmetry axes.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{dist_to_segment, EllipseProjection, Point, Rect};

/// Parametrized annular domain. The region is always the set strictly inside
/// the exterior boundary and strictly outside the interior boundary.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    /// Circles of radii `r0 < big_r0`, both centered at the origin.
    ConcentricAnnulus { r0: f64, big_r0: f64 },
    /// Inner circle radius `r` centered at (a, 0), outer radius `big_r`
    /// centered at the origin, with a + r < R.
    EccentricAnnulus { a: f64, r: f64, big_r: f64 },
    /// Origin-centered ellipse with semi-axes (b1, b2) minus the closed disk
    /// of radius `a_in`.
    PetalEllipse { a_in: f64, b1: f64, b2: f64 },
    /// Regular k-gon of circumradius `rho` (one vertex on the positive
    /// x-axis) minus the closed disk of radius `a_in`.
    PetalPolygon { a_in: f64, k: u32, rho: f64 },
    /// Ellipse (b1, b2) minus the same ellipse scaled by `s` in (0, 1).
    ScaledEllipseAnnulus { b1: f64, b2: f64, s: f64 },
}

/// Long/short labelling of a symmetry axis by boundary extent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisKind {
    Long,
    Short,
    Other,
}

/// A mirror axis of the domain, anchored at the outer-boundary center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryAxis {
    /// Unit direction of the axis line.
    pub direction: Point,
    /// Always the outer-boundary center (the origin for every variant).
    pub anchor: Point,
    pub kind: AxisKind,
}

impl SymmetryAxis {
    fn new(direction: Point, kind: AxisKind) -> Self {
        SymmetryAxis {
            direction: direction.normalized(),
            anchor: Point::ORIGIN,
            kind,
        }
    }

    /// Distance from `p` to the axis line.
    pub fn distance(&self, p: Point) -> f64 {
        self.direction.cross(p.sub(self.anchor)).abs()
    }

    /// Signed coordinate of `p` along the axis direction.
    pub fn coordinate(&self, p: Point) -> f64 {
        self.direction.dot(p.sub(self.anchor))
    }

    pub fn reflect(&self, p: Point) -> Point {
        p.reflect_across(self.anchor, self.direction)
    }
}

/// Symmetry axes of a domain. The concentric annulus carries the full
/// rotation group; it reports the two coordinate axes plus the flag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryInfo {
    pub axes: Vec<SymmetryAxis>,
    pub full_rotational: bool,
}

impl DomainSpec {
    pub fn variant_name(&self) -> &'static str {
        match self {
            DomainSpec::ConcentricAnnulus { .. } => "ConcentricAnnulus",
            DomainSpec::EccentricAnnulus { .. } => "EccentricAnnulus",
            DomainSpec::PetalEllipse { .. } => "PetalEllipse",
            DomainSpec::PetalPolygon { .. } => "PetalPolygon",
            DomainSpec::ScaledEllipseAnnulus { .. } => "ScaledEllipseAnnulus",
        }
    }

    /// Every violated invariant, empty iff the spec is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut v = Vec::new();
        match *self {
            DomainSpec::ConcentricAnnulus { r0, big_r0 } => {
                if !(r0 > 0.0) {
                    v.push("r0 > 0 violated".into());
                }
                if !(r0 < big_r0) {
                    v.push("r0 < R0 violated".into());
                }
            }
            DomainSpec::EccentricAnnulus { a, r, big_r } => {
                if !(a > 0.0) {
                    v.push("a > 0 violated".into());
                }
                if !(r > 0.0) {
                    v.push("r > 0 violated".into());
                }
                if !(a + r < big_r) {
                    v.push("a+r<R violated".into());
                }
            }
            DomainSpec::PetalEllipse { a_in, b1, b2 } => {
                if !(a_in > 0.0) {
                    v.push("a_in > 0 violated".into());
                }
                if !(a_in < b1.min(b2)) {
                    v.push("a_in < min(b1,b2) violated".into());
                }
            }
            DomainSpec::PetalPolygon { a_in, k, rho } => {
                if k < 3 {
                    v.push("k >= 3 violated".into());
                }
                if !(a_in > 0.0) {
                    v.push("a_in > 0 violated".into());
                }
                if k >= 3 && !(a_in < rho * (PI / k as f64).cos()) {
                    v.push("a_in < polygon inradius violated".into());
                }
            }
            DomainSpec::ScaledEllipseAnnulus { b1, b2, s } => {
                if !(b1 > 0.0 && b2 > 0.0) {
                    v.push("b1, b2 > 0 violated".into());
                }
                if !(s > 0.0 && s < 1.0) {
                    v.push("0 < s < 1 violated".into());
                }
            }
        }
        v
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Strict interior membership: inside the exterior boundary and strictly
    /// outside the interior one.
    pub fn contains(&self, p: Point) -> bool {
        match *self {
            DomainSpec::ConcentricAnnulus { r0, big_r0 } => {
                let d = p.norm();
                d > r0 && d < big_r0
            }
            DomainSpec::EccentricAnnulus { a, r, big_r } => {
                p.norm() < big_r && p.dist(Point::new(a, 0.0)) > r
            }
            DomainSpec::PetalEllipse { a_in, b1, b2 } => {
                EllipseProjection::new(b1, b2).is_inside(p) && p.norm() > a_in
            }
            DomainSpec::PetalPolygon { a_in, k, rho } => {
                polygon_fold(p, k).dot(polygon_edge_normal(k)) < rho * (PI / k as f64).cos()
                    && p.norm() > a_in
            }
            DomainSpec::ScaledEllipseAnnulus { b1, b2, s } => {
                EllipseProjection::new(b1, b2).is_inside(p)
                    && !inside_or_on_ellipse(p, s * b1, s * b2)
            }
        }
    }

    /// Signed distance to the domain: negative inside, positive outside,
    /// zero on either boundary. Exact for circles and polygons; 1e-12
    /// projection accuracy for ellipses.
    pub fn signed_distance(&self, p: Point) -> f64 {
        self.outer_signed_distance(p).max(self.inner_signed_distance(p))
    }

    /// Signed distance to the region bounded by the exterior boundary
    /// (negative inside it).
    pub(crate) fn outer_signed_distance(&self, p: Point) -> f64 {
        match *self {
            DomainSpec::ConcentricAnnulus { big_r0, .. } => p.norm() - big_r0,
            DomainSpec::EccentricAnnulus { big_r, .. } => p.norm() - big_r,
            DomainSpec::PetalEllipse { b1, b2, .. }
            | DomainSpec::ScaledEllipseAnnulus { b1, b2, .. } => {
                EllipseProjection::new(b1, b2).signed_distance(p)
            }
            DomainSpec::PetalPolygon { k, rho, .. } => {
                let q = polygon_fold(p, k);
                let (v0, v1) = polygon_sector_edge(k, rho);
                let d = dist_to_segment(q, v0, v1);
                if q.dot(polygon_edge_normal(k)) < rho * (PI / k as f64).cos() {
                    -d
                } else {
                    d
                }
            }
        }
    }

    /// Signed distance to the complement of the interior hole
    /// (negative outside the hole, i.e. on the domain side).
    pub(crate) fn inner_signed_distance(&self, p: Point) -> f64 {
        match *self {
            DomainSpec::ConcentricAnnulus { r0, .. } => r0 - p.norm(),
            DomainSpec::EccentricAnnulus { a, r, .. } => r - p.dist(Point::new(a, 0.0)),
            DomainSpec::PetalEllipse { a_in, .. } | DomainSpec::PetalPolygon { a_in, .. } => {
                a_in - p.norm()
            }
            DomainSpec::ScaledEllipseAnnulus { b1, b2, s } => {
                -EllipseProjection::new(s * b1, s * b2).signed_distance(p)
            }
        }
    }

    /// Distance from `p` to the interior boundary curve.
    pub fn dist_to_inner_boundary(&self, p: Point) -> f64 {
        self.inner_signed_distance(p).abs()
    }

    /// Distance from `p` to the exterior boundary curve.
    pub fn dist_to_outer_boundary(&self, p: Point) -> f64 {
        self.outer_signed_distance(p).abs()
    }

    /// Center of the interior boundary.
    pub fn inner_center(&self) -> Point {
        match *self {
            DomainSpec::EccentricAnnulus { a, .. } => Point::new(a, 0.0),
            _ => Point::ORIGIN,
        }
    }

    /// Radius of the interior boundary for circular holes.
    pub fn inner_radius(&self) -> Option<f64> {
        match *self {
            DomainSpec::ConcentricAnnulus { r0, .. } => Some(r0),
            DomainSpec::EccentricAnnulus { r, .. } => Some(r),
            DomainSpec::PetalEllipse { a_in, .. } | DomainSpec::PetalPolygon { a_in, .. } => {
                Some(a_in)
            }
            DomainSpec::ScaledEllipseAnnulus { .. } => None,
        }
    }

    /// Narrowest gap between the two boundaries; sets the curvature scale
    /// of the solution.
    pub fn min_boundary_gap(&self) -> f64 {
        match *self {
            DomainSpec::ConcentricAnnulus { r0, big_r0 } => big_r0 - r0,
            DomainSpec::EccentricAnnulus { a, r, big_r } => big_r - a - r,
            DomainSpec::PetalEllipse { a_in, b1, b2 } => b1.min(b2) - a_in,
            DomainSpec::PetalPolygon { a_in, k, rho } => rho * (PI / k as f64).cos() - a_in,
            DomainSpec::ScaledEllipseAnnulus { b1, b2, s } => (1.0 - s) * b1.min(b2),
        }
    }

    /// Tight axis-aligned bounding box of the exterior boundary.
    pub fn tight_bbox(&self) -> Rect {
        match *self {
            DomainSpec::ConcentricAnnulus { big_r0, .. } => {
                Rect::new(-big_r0, big_r0, -big_r0, big_r0)
            }
            DomainSpec::EccentricAnnulus { big_r, .. } => Rect::new(-big_r, big_r, -big_r, big_r),
            DomainSpec::PetalEllipse { b1, b2, .. }
            | DomainSpec::ScaledEllipseAnnulus { b1, b2, .. } => Rect::new(-b1, b1, -b2, b2),
            DomainSpec::PetalPolygon { k, rho, .. } => {
                let mut r = Rect::new(f64::MAX, f64::MIN, f64::MAX, f64::MIN);
                for j in 0..k {
                    let ang = 2.0 * PI * j as f64 / k as f64;
                    r.xmin = r.xmin.min(rho * ang.cos());
                    r.xmax = r.xmax.max(rho * ang.cos());
                    r.ymin = r.ymin.min(rho * ang.sin());
                    r.ymax = r.ymax.max(rho * ang.sin());
                }
                r
            }
        }
    }

    /// Whether reflection across the x-axis maps the domain to itself.
    /// True for every variant by construction.
    pub fn x_mirror_symmetric(&self) -> bool {
        true
    }

    /// Whether reflection across the y-axis maps the domain to itself.
    pub fn y_mirror_symmetric(&self) -> bool {
        match *self {
            DomainSpec::ConcentricAnnulus { .. }
            | DomainSpec::PetalEllipse { .. }
            | DomainSpec::ScaledEllipseAnnulus { .. } => true,
            DomainSpec::EccentricAnnulus { .. } => false,
            DomainSpec::PetalPolygon { k, .. } => k % 2 == 0,
        }
    }
}

/// Symmetry axes per variant. For the eccentric annulus the single axis is
/// the x-axis and its long semi-axis is the x < a half (the wider gap).
pub fn symmetry_axes(spec: &DomainSpec) -> SymmetryInfo {
    let x = Point::new(1.0, 0.0);
    let y = Point::new(0.0, 1.0);
    match *spec {
        DomainSpec::ConcentricAnnulus { .. } => SymmetryInfo {
            axes: vec![
                SymmetryAxis::new(x, AxisKind::Other),
                SymmetryAxis::new(y, AxisKind::Other),
            ],
            full_rotational: true,
        },
        DomainSpec::EccentricAnnulus { .. } => SymmetryInfo {
            axes: vec![SymmetryAxis::new(x, AxisKind::Long)],
            full_rotational: false,
        },
        DomainSpec::PetalEllipse { b1, b2, .. }
        | DomainSpec::ScaledEllipseAnnulus { b1, b2, .. } => {
            let (kx, ky) = if b1 > b2 {
                (AxisKind::Long, AxisKind::Short)
            } else if b2 > b1 {
                (AxisKind::Short, AxisKind::Long)
            } else {
                (AxisKind::Other, AxisKind::Other)
            };
            SymmetryInfo {
                axes: vec![SymmetryAxis::new(x, kx), SymmetryAxis::new(y, ky)],
                full_rotational: false,
            }
        }
        DomainSpec::PetalPolygon { k, .. } => SymmetryInfo {
            axes: (0..k)
                .map(|j| {
                    let ang = 2.0 * PI * j as f64 / k as f64;
                    SymmetryAxis::new(Point::new(ang.cos(), ang.sin()), AxisKind::Other)
                })
                .collect(),
            full_rotational: false,
        },
    }
}

/// Folds `p` into the fundamental sector [0, pi/k] of the dihedral group of
/// the regular k-gon, whose single boundary edge runs from the vertex at
/// angle 0 to the vertex at angle 2*pi/k.
fn polygon_fold(p: Point, k: u32) -> Point {
    let sector = 2.0 * PI / k as f64;
    let r = p.norm();
    let mut phi = p.angle().rem_euclid(sector);
    if phi > 0.5 * sector {
        phi = sector - phi;
    }
    Point::new(r * phi.cos(), r * phi.sin())
}

/// Outward unit normal of the sector edge (at angle pi/k).
fn polygon_edge_normal(k: u32) -> Point {
    let half = PI / k as f64;
    Point::new(half.cos(), half.sin())
}

fn polygon_sector_edge(k: u32, rho: f64) -> (Point, Point) {
    let sector = 2.0 * PI / k as f64;
    (
        Point::new(rho, 0.0),
        Point::new(rho * sector.cos(), rho * sector.sin()),
    )
}

/// All k-gon vertices, counterclockwise from the positive x-axis.
pub(crate) fn polygon_vertices(k: u32, rho: f64) -> Vec<Point> {
    (0..k)
        .map(|j| {
            let ang = 2.0 * PI * j as f64 / k as f64;
            Point::new(rho * ang.cos(), rho * ang.sin())
        })
        .collect()
}

fn inside_or_on_ellipse(p: Point, b1: f64, b2: f64) -> bool {
    (p.x / b1).powi(2) + (p.y / b2).powi(2) <= 1.0
}

// --- JSON form: {"variant": "...", "params": {"name": value, ...}} -------

impl Serialize for DomainSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut params = BTreeMap::new();
        match *self {
            DomainSpec::ConcentricAnnulus { r0, big_r0 } => {
                params.insert("r0", r0);
                params.insert("R0", big_r0);
            }
            DomainSpec::EccentricAnnulus { a, r, big_r } => {
                params.insert("a", a);
                params.insert("r", r);
                params.insert("R", big_r);
            }
            DomainSpec::PetalEllipse { a_in, b1, b2 } => {
                params.insert("a_in", a_in);
                params.insert("b1", b1);
                params.insert("b2", b2);
            }
            DomainSpec::PetalPolygon { a_in, k, rho } => {
                params.insert("a_in", a_in);
                params.insert("k", k as f64);
                params.insert("rho", rho);
            }
            DomainSpec::ScaledEllipseAnnulus { b1, b2, s } => {
                params.insert("b1", b1);
                params.insert("b2", b2);
                params.insert("s", s);
            }
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            variant: &'a str,
            params: BTreeMap<&'a str, f64>,
        }
        Repr {
            variant: self.variant_name(),
            params,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DomainSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            variant: String,
            params: BTreeMap<String, f64>,
        }
        let repr = Repr::deserialize(deserializer)?;
        let mut params = repr.params;
        let mut take = |key: &str| -> Result<f64, D::Error> {
            params
                .remove(key)
                .ok_or_else(|| D::Error::custom(format!("missing parameter `{key}`")))
        };
        let spec = match repr.variant.as_str() {
            "ConcentricAnnulus" => DomainSpec::ConcentricAnnulus {
                r0: take("r0")?,
                big_r0: take("R0")?,
            },
            "EccentricAnnulus" => DomainSpec::EccentricAnnulus {
                a: take("a")?,
                r: take("r")?,
                big_r: take("R")?,
            },
            "PetalEllipse" => DomainSpec::PetalEllipse {
                a_in: take("a_in")?,
                b1: take("b1")?,
                b2: take("b2")?,
            },
            "PetalPolygon" => {
                let a_in = take("a_in")?;
                let k = take("k")?;
                let rho = take("rho")?;
                if k.fract() != 0.0 || k < 0.0 || k > u32::MAX as f64 {
                    return Err(D::Error::custom(format!("k must be a positive integer, got {k}")));
                }
                DomainSpec::PetalPolygon {
                    a_in,
                    k: k as u32,
                    rho,
                }
            }
            "ScaledEllipseAnnulus" => DomainSpec::ScaledEllipseAnnulus {
                b1: take("b1")?,
                b2: take("b2")?,
                s: take("s")?,
            },
            other => {
                return Err(D::Error::custom(format!("unknown variant `{other}`")));
            }
        };
        if let Some(extra) = params.keys().next() {
            return Err(D::Error::custom(format!(
                "unknown parameter `{extra}` for variant {}",
                spec.variant_name()
            )));
        }
        Ok(spec)
    }
}
