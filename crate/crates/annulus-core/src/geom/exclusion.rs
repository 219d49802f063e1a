//! Regions that provably contain every critical point: an open rectangle
//! from moving-plane bounds intersected with the domain, minus an annular
//! band around the interior boundary from moving-sphere bounds.

use serde::{Deserialize, Serialize};

use super::{DomainSpec, Point, Rect};
use crate::error::{Error, Result};

/// Admissible set: (allowed_box ∩ Ω) \ { r_lo < |p - center| <= r_hi }.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExclusionRegion {
    pub allowed_box: Rect,
    pub forbidden_center: Point,
    pub forbidden_r_lo: f64,
    pub forbidden_r_hi: f64,
}

impl ExclusionRegion {
    pub fn admissible_contains(&self, spec: &DomainSpec, p: Point) -> bool {
        self.admissible_contains_with_margin(spec, p, 0.0)
    }

    /// Containment with slack: the box is shrunk by `margin` and the
    /// forbidden band is widened outward by `margin`. Points inside the
    /// domain always lie outside the hole, so only the outer band radius
    /// needs the margin.
    pub fn admissible_contains_with_margin(
        &self,
        spec: &DomainSpec,
        p: Point,
        margin: f64,
    ) -> bool {
        if !self.allowed_box.contains_with_margin(p, margin) || !spec.contains(p) {
            return false;
        }
        let d = p.dist(self.forbidden_center);
        d <= self.forbidden_r_lo - margin || d > self.forbidden_r_hi + margin
    }

    /// Distance by which `p` clears every admissible-set boundary
    /// (negative when `p` is outside the admissible set).
    pub fn slack(&self, spec: &DomainSpec, p: Point) -> f64 {
        let b = &self.allowed_box;
        let box_slack = (p.x - b.xmin)
            .min(b.xmax - p.x)
            .min(p.y - b.ymin)
            .min(b.ymax - p.y);
        let d = p.dist(self.forbidden_center);
        let band_slack = if d <= self.forbidden_r_lo {
            self.forbidden_r_lo - d
        } else {
            d - self.forbidden_r_hi
        };
        let domain_slack = -spec.signed_distance(p);
        box_slack.min(band_slack).min(domain_slack)
    }
}

/// Closed-form exclusion regions for the two variants the moving-plane and
/// moving-sphere bounds cover.
pub fn exclusion_region(spec: &DomainSpec) -> Result<ExclusionRegion> {
    match *spec {
        DomainSpec::PetalEllipse { a_in, b1, b2 } => Ok(ExclusionRegion {
            allowed_box: Rect::new(
                -(a_in + b1) / 2.0,
                (a_in + b1) / 2.0,
                -(a_in + b2) / 2.0,
                (a_in + b2) / 2.0,
            ),
            forbidden_center: Point::ORIGIN,
            forbidden_r_lo: a_in,
            // c = min(b1, b2): radius of the inscribed circle of the ellipse
            forbidden_r_hi: (a_in * b1.min(b2)).sqrt(),
        }),
        DomainSpec::EccentricAnnulus { a, r, big_r } => Ok(ExclusionRegion {
            allowed_box: Rect::new((-big_r + a - r) / 2.0, (a + r + big_r) / 2.0, -big_r, big_r),
            forbidden_center: Point::new(a, 0.0),
            forbidden_r_lo: r,
            forbidden_r_hi: (r * (big_r - a)).sqrt(),
        }),
        _ => Err(Error::UnsupportedVariant {
            variant: spec.variant_name(),
            operation: "exclusion_region",
        }),
    }
}
