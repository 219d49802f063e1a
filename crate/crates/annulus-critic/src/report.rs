//! Report schema written by the run pipeline.

use serde::Serialize;
use serde_json::Value;

use annulus_core::{CriticalPoint, Rect};

use crate::config::{CheckKind, ExperimentConfig};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Serialize)]
pub struct CheckResult {
    pub name: CheckKind,
    pub status: CheckStatus,
    pub detail: Value,
}

#[derive(Debug, Serialize)]
pub struct GridEcho {
    pub n: usize,
    pub h: f64,
    pub bbox: Rect,
    pub interior_count: usize,
    pub geometry_hash: String,
}

#[derive(Debug, Serialize)]
pub struct SolverEcho {
    pub newton_steps: usize,
    pub final_residual: f64,
}

#[derive(Debug, Serialize)]
pub struct VerdictReport<'a> {
    pub schema: u32,
    pub timestamp_unix: u64,
    pub config: &'a ExperimentConfig,
    pub grid: GridEcho,
    pub solver: SolverEcho,
    pub checks: Vec<CheckResult>,
}

impl VerdictReport<'_> {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }
}

/// Spec wire format for critical_points.json rows.
#[derive(Debug, Serialize)]
pub struct CriticalPointRow {
    pub x: f64,
    pub y: f64,
    pub kind: String,
    pub grad_norm: f64,
    pub hess_eigs: [f64; 2],
    pub axis: Option<String>,
}

pub fn critical_point_rows(points: &[CriticalPoint], axis_labels: &[String]) -> Vec<CriticalPointRow> {
    points
        .iter()
        .map(|p| CriticalPointRow {
            x: p.location.x,
            y: p.location.y,
            kind: format!("{:?}", p.kind).to_lowercase(),
            grad_norm: p.grad_norm,
            hess_eigs: [p.hessian_eigs.0, p.hessian_eigs.1],
            axis: p.on_axis.map(|a| axis_labels[a.axis].clone()),
        })
        .collect()
}

/// Spec wire format for sweep.json rows.
#[derive(Debug, Serialize)]
pub struct SweepRow {
    pub lambda: f64,
    pub min_diff: f64,
    pub max_diff: f64,
    pub violations: usize,
    pub n_pairs: usize,
    pub flagged: bool,
}

impl From<&annulus_core::reflect::ReflectionReport> for SweepRow {
    fn from(r: &annulus_core::reflect::ReflectionReport) -> Self {
        SweepRow {
            lambda: r.lambda,
            min_diff: r.min_diff,
            max_diff: r.max_diff,
            violations: r.violations,
            n_pairs: r.n_pairs,
            flagged: r.flagged,
        }
    }
}

pub fn unix_timestamp() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
