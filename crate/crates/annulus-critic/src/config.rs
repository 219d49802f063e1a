//! Experiment configuration: strict JSON parsing with documented defaults
//! for omitted tolerances.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use annulus_core::{DomainSpec, Nonlinearity};

pub const DEFAULT_SOLVER_TOL: f64 = 1e-10;
pub const DEFAULT_TAU_D_CELLS: f64 = 3.0;
pub const DEFAULT_SWEEP_STEPS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Counts,
    Exclusion,
    Morse,
    Nodal,
    PlaneSweep,
    SphereSweep,
}

pub const ALL_CHECKS: [CheckKind; 6] = [
    CheckKind::Counts,
    CheckKind::Exclusion,
    CheckKind::Morse,
    CheckKind::Nodal,
    CheckKind::PlaneSweep,
    CheckKind::SphereSweep,
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Max-norm residual bound for the Newton solve.
    #[serde(default = "default_solver_tol")]
    pub solver_tol: f64,
    /// Gradient acceptance tolerance; when omitted, 1e-8 times the max
    /// nodal gradient norm.
    #[serde(default)]
    pub tau_g: Option<f64>,
    /// Axis-assignment distance in grid cells (times h).
    #[serde(default = "default_tau_d_cells")]
    pub tau_d_cells: f64,
}

fn default_solver_tol() -> f64 {
    DEFAULT_SOLVER_TOL
}

fn default_tau_d_cells() -> f64 {
    DEFAULT_TAU_D_CELLS
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            solver_tol: DEFAULT_SOLVER_TOL,
            tau_g: None,
            tau_d_cells: DEFAULT_TAU_D_CELLS,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub domain: DomainSpec,
    pub nonlinearity: Nonlinearity,
    pub n: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Enabled checks; all of them when omitted.
    #[serde(default)]
    pub checks: Option<Vec<CheckKind>>,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn enabled_checks(&self) -> Vec<CheckKind> {
        self.checks.clone().unwrap_or_else(|| ALL_CHECKS.to_vec())
    }

    /// Every violated invariant of the configuration.
    pub fn validate(&self) -> Vec<String> {
        let mut v = self.domain.validate();
        v.extend(self.nonlinearity.validate());
        if self.n < 32 {
            v.push(format!("n >= 32 violated (n = {})", self.n));
        }
        if !(self.tolerances.solver_tol > 0.0) {
            v.push("solver_tol > 0 violated".into());
        }
        if let Some(tau_g) = self.tolerances.tau_g {
            if !(tau_g > 0.0) {
                v.push("tau_g > 0 violated".into());
            }
        }
        if !(self.tolerances.tau_d_cells > 0.0) {
            v.push("tau_d_cells > 0 violated".into());
        }
        v
    }
}

/// Strict parse: unknown keys and malformed values are errors; the returned
/// config has passed validation.
pub fn parse_config(path: &Path) -> anyhow::Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let config: ExperimentConfig = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    let violations = config.validate();
    if !violations.is_empty() {
        bail!("invalid config {}: {}", path.display(), violations.join("; "));
    }
    Ok(config)
}
