//! Instability sweep: the critical set collapses from a ring to two points
//! as the inner circle is offset.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use annulus_core::{build_grid, find_critical_points, solve, DomainSpec, Nonlinearity};

use crate::report::{unix_timestamp, SCHEMA_VERSION};

#[derive(Debug, Clone, Serialize)]
pub struct InstabilityParams {
    pub r0: f64,
    pub big_r0: f64,
    pub offsets: Vec<f64>,
    pub nonlinearity: Nonlinearity,
    pub n: usize,
}

#[derive(Debug, Serialize)]
pub struct OffsetRecord {
    pub a: f64,
    pub kind: &'static str,
    pub ring_radius: Option<f64>,
    pub ring_spread: Option<f64>,
    pub n_points: usize,
    pub max_cluster_diameter: f64,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Serialize)]
pub struct SweepReport {
    pub schema: u32,
    pub timestamp_unix: u64,
    pub params: InstabilityParams,
    pub offsets: Vec<OffsetRecord>,
    /// Ring at a = 0 and exactly two isolated points at every a > 0.
    pub collapse_confirmed: bool,
}

/// Validates every offset, solves them (in parallel), and records either
/// the critical ring (a = 0) or the isolated points per offset.
pub fn instability_sweep(params: &InstabilityParams) -> anyhow::Result<SweepReport> {
    for &a in &params.offsets {
        if a < 0.0 {
            bail!("offset a = {a} must be nonnegative");
        }
        if a > 0.0 {
            let spec = DomainSpec::EccentricAnnulus {
                a,
                r: params.r0,
                big_r: params.big_r0,
            };
            let violations = spec.validate();
            if !violations.is_empty() {
                bail!("offset a = {a}: {}", violations.join("; "));
            }
        }
    }
    let base = DomainSpec::ConcentricAnnulus {
        r0: params.r0,
        big_r0: params.big_r0,
    };
    let violations = base.validate();
    if !violations.is_empty() {
        bail!("base annulus: {}", violations.join("; "));
    }

    let offsets: anyhow::Result<Vec<OffsetRecord>> = params
        .offsets
        .par_iter()
        .map(|&a| {
            let spec = if a == 0.0 {
                base.clone()
            } else {
                DomainSpec::EccentricAnnulus {
                    a,
                    r: params.r0,
                    big_r: params.big_r0,
                }
            };
            let grid = Arc::new(build_grid(&spec, params.n)?);
            let field = solve(&grid, &params.nonlinearity, 1e-10)?;
            let set = find_critical_points(&field, None);
            Ok(OffsetRecord {
                a,
                kind: if set.ring.is_some() { "ring" } else { "points" },
                ring_radius: set.ring.as_ref().map(|r| r.radius),
                ring_spread: set.ring.as_ref().map(|r| r.radius_spread),
                n_points: set.points.len(),
                max_cluster_diameter: set.max_cluster_diameter,
                points: set.points.iter().map(|p| [p.location.x, p.location.y]).collect(),
            })
        })
        .collect();
    let offsets = offsets?;

    let collapse_confirmed = offsets.iter().all(|rec| {
        if rec.a == 0.0 {
            rec.kind == "ring"
        } else {
            rec.kind == "points" && rec.n_points == 2
        }
    });

    Ok(SweepReport {
        schema: SCHEMA_VERSION,
        timestamp_unix: unix_timestamp(),
        params: params.clone(),
        offsets,
        collapse_confirmed,
    })
}

pub fn write_sweep_report(report: &SweepReport, out_dir: &Path) -> anyhow::Result<()> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join("sweep.json");
    let text = serde_json::to_string_pretty(&json!(report))?;
    fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}
