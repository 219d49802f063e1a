//! The solve -> analyze -> verify pipeline behind `annulus-critic run`.

use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::sync::Arc;

use anyhow::Context;
use serde_json::{json, Value};

use annulus_core::analysis::{nodal_set, winding_number, NodalCurve};
use annulus_core::reflect::{sweep_plane, sweep_sphere, ExpectedSign, Sweep};
use annulus_core::{
    build_grid, count_by_axis, exclusion_region, find_critical_points, morse_balance,
    symmetry_axes, CriticalKind, CriticalSet, DomainSpec, Error as CoreError, Point,
    ScalarField, SymmetryInfo,
};

use crate::config::{CheckKind, ExperimentConfig, DEFAULT_SWEEP_STEPS};
use crate::report::{
    critical_point_rows, unix_timestamp, CheckResult, CheckStatus, GridEcho, SolverEcho,
    SweepRow, VerdictReport, SCHEMA_VERSION,
};

/// Pipeline error carrying the failing stage for the marker file and for
/// exit-code mapping.
#[derive(Debug)]
pub struct StageError {
    pub stage: &'static str,
    pub non_convergence: bool,
    pub source: anyhow::Error,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage {} failed: {:#}", self.stage, self.source)
    }
}

impl std::error::Error for StageError {}

fn stage<T>(name: &'static str, r: Result<T, CoreError>) -> Result<T, StageError> {
    r.map_err(|e| StageError {
        stage: name,
        non_convergence: matches!(e, CoreError::NonConvergence { .. }),
        source: anyhow::Error::new(e),
    })
}

pub struct RunOutput {
    pub all_passed: bool,
    pub n_points: usize,
    pub has_ring: bool,
}

/// Runs the full pipeline, writing artifacts into `out_dir`. On a stage
/// failure the partial artifacts are kept and a `failed` marker names the
/// stage.
pub fn run(config: &ExperimentConfig, out_dir: &Path) -> anyhow::Result<RunOutput> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    match run_inner(config, out_dir) {
        Ok(out) => Ok(out),
        Err(e) => {
            let marker = out_dir.join("failed");
            let _ = fs::write(&marker, format!("{e}\n"));
            Err(anyhow::Error::new(e))
        }
    }
}

fn run_inner(config: &ExperimentConfig, out_dir: &Path) -> Result<RunOutput, StageError> {
    let spec = &config.domain;
    let grid = Arc::new(stage("grid", build_grid(spec, config.n))?);
    let h = grid.h;

    let field = stage(
        "solve",
        annulus_core::solve(&grid, &config.nonlinearity, config.tolerances.solver_tol),
    )?;

    // artifacts that exist regardless of checks
    write_artifact(out_dir, "field.csv", |w| field.write_csv(w))?;
    write_contours(out_dir, &field)?;

    let info = symmetry_axes(spec);
    let axis_labels = label_axes(&info);
    let mut set = find_critical_points(&field, config.tolerances.tau_g);
    let tau_d = config.tolerances.tau_d_cells * h;
    let counts = count_by_axis(&mut set.points, &info.axes, tau_d);

    write_json(
        out_dir,
        "critical_points.json",
        &critical_point_rows(&set.points, &axis_labels),
    )?;

    let enabled = config.enabled_checks();
    let mut checks = Vec::new();
    let mut plane_rows: Vec<SweepRow> = Vec::new();
    let mut sphere_rows: Vec<SweepRow> = Vec::new();

    for kind in &enabled {
        let result = match kind {
            CheckKind::Counts => check_counts(spec, &set, &counts.per_axis, counts.off_axis, tau_d),
            CheckKind::Morse => check_morse(&set),
            CheckKind::Exclusion => check_exclusion(spec, &set, h),
            CheckKind::Nodal => check_nodal(&field, out_dir, h)?,
            CheckKind::PlaneSweep => check_plane_sweep(spec, &field, &mut plane_rows)?,
            CheckKind::SphereSweep => check_sphere_sweep(spec, &field, &mut sphere_rows)?,
        };
        checks.push(result);
    }
    if enabled.contains(&CheckKind::PlaneSweep) || enabled.contains(&CheckKind::SphereSweep) {
        write_json(
            out_dir,
            "sweep.json",
            &json!({ "plane": plane_rows, "sphere": sphere_rows }),
        )?;
    }

    let d = field.diagnostics();
    let report = VerdictReport {
        schema: SCHEMA_VERSION,
        timestamp_unix: unix_timestamp(),
        config,
        grid: GridEcho {
            n: grid.n,
            h,
            bbox: grid.bbox,
            interior_count: grid.interior_count(),
            geometry_hash: format!("{:016x}", grid.geometry_hash()),
        },
        solver: SolverEcho {
            newton_steps: d.newton_steps,
            final_residual: d.final_residual,
        },
        checks,
    };
    write_json(out_dir, "report.json", &report)?;

    for c in &report.checks {
        let name = serde_json::to_string(&c.name).unwrap_or_default();
        let status = serde_json::to_string(&c.status).unwrap_or_default();
        println!("{:<14} {}", name.trim_matches('"'), status.trim_matches('"'));
    }

    Ok(RunOutput {
        all_passed: report.all_passed(),
        n_points: set.points.len(),
        has_ring: set.ring.is_some(),
    })
}

fn label_axes(info: &SymmetryInfo) -> Vec<String> {
    info.axes
        .iter()
        .enumerate()
        .map(|(i, ax)| {
            if ax.direction.y == 0.0 {
                "x-axis".to_string()
            } else if ax.direction.x == 0.0 {
                "y-axis".to_string()
            } else {
                format!("axis-{i}")
            }
        })
        .collect()
}

/// Expected counts and placement: two points per symmetry axis with
/// maxima on the long semi-axes and saddles on the short, or the critical
/// ring for the rotationally symmetric annulus.
fn check_counts(
    spec: &DomainSpec,
    set: &CriticalSet,
    per_axis: &[usize],
    off_axis: usize,
    tau_d: f64,
) -> CheckResult {
    let detail_points: Vec<Value> = set
        .points
        .iter()
        .map(|p| json!({"x": p.location.x, "y": p.location.y, "kind": format!("{:?}", p.kind)}))
        .collect();
    let ring_detail = set.ring.as_ref().map(|r| {
        json!({"radius": r.radius, "spread": r.radius_spread, "samples": r.sample_count})
    });

    let (pass, expected): (bool, Value) = match *spec {
        DomainSpec::ConcentricAnnulus { .. } => (
            set.ring.is_some() && set.points.is_empty(),
            json!("critical ring"),
        ),
        DomainSpec::EccentricAnnulus { a, r, big_r } => {
            let two = set.points.len() == 2 && set.ring.is_none();
            let counted = per_axis == [2] && off_axis == 0;
            let max_ok = set
                .points
                .iter()
                .find(|p| p.kind == CriticalKind::Maximum)
                .map(|p| p.location.x > -big_r && p.location.x < a - r && p.location.y.abs() < tau_d)
                .unwrap_or(false);
            let saddle_ok = set
                .points
                .iter()
                .find(|p| p.kind == CriticalKind::Saddle)
                .map(|p| p.location.x > a + r && p.location.x < big_r && p.location.y.abs() < tau_d)
                .unwrap_or(false);
            (
                two && counted && max_ok && saddle_ok,
                json!("2 points on the x-axis: maximum left of the hole, saddle right"),
            )
        }
        DomainSpec::PetalEllipse { b1, b2, .. }
        | DomainSpec::ScaledEllipseAnnulus { b1, b2, .. } => {
            if b1 == b2 {
                // rotationally symmetric: same structure as the concentric case
                (set.ring.is_some() && set.points.is_empty(), json!("critical ring"))
            } else {
                let four = set.points.len() == 4 && set.ring.is_none();
                let counted = per_axis == [2, 2] && off_axis == 0;
                let long_axis = usize::from(b2 > b1);
                let maxima_long = set
                    .points
                    .iter()
                    .filter(|p| p.kind == CriticalKind::Maximum)
                    .filter(|p| p.on_axis.map(|a| a.axis) == Some(long_axis))
                    .count()
                    == 2;
                let saddles_short = set
                    .points
                    .iter()
                    .filter(|p| p.kind == CriticalKind::Saddle)
                    .filter(|p| p.on_axis.map(|a| a.axis) == Some(1 - long_axis))
                    .count()
                    == 2;
                (
                    four && counted && maxima_long && saddles_short,
                    json!("4 points: 2 maxima on the long axis, 2 saddles on the short"),
                )
            }
        }
        DomainSpec::PetalPolygon { k, .. } => {
            let expected_total = 2 * k as usize;
            let total_ok = set.points.len() == expected_total && set.ring.is_none();
            let counted =
                per_axis.iter().all(|&c| c == 2) && per_axis.len() == k as usize && off_axis == 0;
            let n_max = set
                .points
                .iter()
                .filter(|p| p.kind == CriticalKind::Maximum)
                .count();
            let n_saddle = set
                .points
                .iter()
                .filter(|p| p.kind == CriticalKind::Saddle)
                .count();
            (
                total_ok && counted && n_max == k as usize && n_saddle == k as usize,
                json!(format!("{expected_total} points, 2 per axis, {k} maxima and {k} saddles")),
            )
        }
    };

    CheckResult {
        name: CheckKind::Counts,
        status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: json!({
            "expected": expected,
            "per_axis": per_axis,
            "off_axis": off_axis,
            "points": detail_points,
            "ring": ring_detail,
            "max_cluster_diameter": set.max_cluster_diameter,
        }),
    }
}

fn check_morse(set: &CriticalSet) -> CheckResult {
    let mb = morse_balance(&set.points);
    CheckResult {
        name: CheckKind::Morse,
        status: if mb.balanced { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: json!({
            "n_max": mb.n_max,
            "n_saddle": mb.n_saddle,
            "n_degenerate": mb.n_degenerate,
        }),
    }
}

fn check_exclusion(spec: &DomainSpec, set: &CriticalSet, h: f64) -> CheckResult {
    match exclusion_region(spec) {
        Ok(ex) => {
            let contained = set
                .points
                .iter()
                .all(|p| ex.admissible_contains_with_margin(spec, p.location, -2.0 * h));
            let min_slack = set
                .points
                .iter()
                .map(|p| ex.slack(spec, p.location))
                .fold(f64::MAX, f64::min);
            CheckResult {
                name: CheckKind::Exclusion,
                status: if contained { CheckStatus::Pass } else { CheckStatus::Fail },
                detail: json!({
                    "allowed_box": ex.allowed_box,
                    "forbidden_center": ex.forbidden_center,
                    "forbidden_radii": [ex.forbidden_r_lo, ex.forbidden_r_hi],
                    "min_sharp_slack": if set.points.is_empty() { Value::Null } else { json!(min_slack) },
                    "tolerance": 2.0 * h,
                }),
            }
        }
        Err(_) => CheckResult {
            name: CheckKind::Exclusion,
            status: CheckStatus::Skipped,
            detail: json!({"reason": "exclusion region defined only for EccentricAnnulus and PetalEllipse"}),
        },
    }
}

fn check_nodal(field: &ScalarField, out_dir: &Path, h: f64) -> Result<CheckResult, StageError> {
    let spec = &field.grid().spec;
    let mut all_ok = true;
    let mut per_theta = Vec::new();
    for k in 0..8 {
        let ang = std::f64::consts::PI * k as f64 / 8.0;
        let theta = Point::new(ang.cos(), ang.sin());
        let curves = nodal_set(field, theta);
        write_artifact(out_dir, &format!("nodal_{k}.csv"), |w| {
            write_curves_csv(w, &curves)
        })?;

        let mut ends_ok = true;
        let mut winding_ok = true;
        let mut crossing_ok = true;
        for c in &curves {
            if c.closed {
                winding_ok &= winding_number(&c.points, spec.inner_center()).abs() >= 1;
            } else {
                for p in [c.points.first().unwrap(), c.points.last().unwrap()] {
                    let d = spec
                        .dist_to_inner_boundary(*p)
                        .min(spec.dist_to_outer_boundary(*p));
                    ends_ok &= d <= 2.0 * h;
                }
            }
            if k == 0 {
                if let DomainSpec::EccentricAnnulus { a, .. } = *spec {
                    for w in c.points.windows(2) {
                        let (x0, x1) = (w[0].x - a, w[1].x - a);
                        crossing_ok &= !(x0 * x1 < 0.0 && x0.abs() > 1e-9 && x1.abs() > 1e-9);
                    }
                }
            }
        }
        all_ok &= ends_ok && winding_ok && crossing_ok;
        per_theta.push(json!({
            "k": k,
            "curves": curves.len(),
            "open_ends_near_boundary": ends_ok,
            "closed_enclose_inner": winding_ok,
            "no_inner_line_crossing": crossing_ok,
        }));
    }
    Ok(CheckResult {
        name: CheckKind::Nodal,
        status: if all_ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: json!({"per_theta": per_theta}),
    })
}

/// Moving-plane intervals (reflection of the swept strip stays inside
/// the domain) per variant, as
/// (normal, lambda_lo, lambda_hi) triples in the normal coordinate. The
/// upper limit stops 2h short of the boundary: closer strips are thinner
/// than a lattice cell and hold no nodes.
fn plane_intervals(spec: &DomainSpec, h: f64) -> Vec<(Point, f64, f64)> {
    let raw: Vec<(Point, f64, f64)> = match *spec {
        DomainSpec::EccentricAnnulus { a, r, big_r } => vec![
            (Point::new(1.0, 0.0), (a + r + big_r) / 2.0, big_r),
            (Point::new(-1.0, 0.0), (big_r - a + r) / 2.0, big_r),
        ],
        DomainSpec::PetalEllipse { a_in, b1, b2 } => vec![
            (Point::new(1.0, 0.0), (a_in + b1) / 2.0, b1),
            (Point::new(-1.0, 0.0), (a_in + b1) / 2.0, b1),
            (Point::new(0.0, 1.0), (a_in + b2) / 2.0, b2),
            (Point::new(0.0, -1.0), (a_in + b2) / 2.0, b2),
        ],
        _ => Vec::new(),
    };
    raw.into_iter()
        .filter_map(|(n, lo, hi)| (hi - 2.0 * h > lo).then_some((n, lo, hi - 2.0 * h)))
        .collect()
}

/// Moving-sphere band with the lower limit raised 2h off the interior
/// boundary for the same resolution reason.
fn sphere_band(spec: &DomainSpec, h: f64) -> Option<(Point, f64, f64)> {
    let (center, lo, hi) = match *spec {
        DomainSpec::EccentricAnnulus { a, r, big_r } => {
            (Point::new(a, 0.0), r, (r * (big_r - a)).sqrt())
        }
        DomainSpec::PetalEllipse { a_in, b1, b2 } => {
            (Point::ORIGIN, a_in, (a_in * b1.min(b2)).sqrt())
        }
        _ => return None,
    };
    (lo + 2.0 * h < hi).then_some((center, lo + 2.0 * h, hi))
}

fn sweep_detail(label: &str, normal_or_center: Point, sweep: &Sweep) -> Value {
    json!({
        "interface": label,
        "anchor": normal_or_center,
        "first_violation": sweep.first_violation,
        "n_lambda": sweep.reports.len(),
        "worst_max_diff": sweep.reports.iter().map(|r| r.max_diff).fold(f64::MIN, f64::max),
        "normal_sign": sweep.reports.iter().map(|r| format!("{:?}", r.boundary_normal_sign)).collect::<Vec<_>>(),
    })
}

fn check_plane_sweep(
    spec: &DomainSpec,
    field: &ScalarField,
    rows: &mut Vec<SweepRow>,
) -> Result<CheckResult, StageError> {
    let intervals = plane_intervals(spec, field.grid().h);
    if intervals.is_empty() {
        return Ok(CheckResult {
            name: CheckKind::PlaneSweep,
            status: CheckStatus::Skipped,
            detail: json!({"reason": "no moving-plane interval for this variant at this resolution"}),
        });
    }
    let mut all_ok = true;
    let mut details = Vec::new();
    for (normal, lo, hi) in intervals {
        let sweep = stage(
            "plane-sweep",
            sweep_plane(field, normal, (lo, hi), DEFAULT_SWEEP_STEPS, ExpectedSign::Negative),
        )?;
        rows.extend(sweep.reports.iter().map(SweepRow::from));
        all_ok &= sweep.first_violation.is_none();
        details.push(sweep_detail("plane", normal, &sweep));
    }
    Ok(CheckResult {
        name: CheckKind::PlaneSweep,
        status: if all_ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: json!({"sweeps": details}),
    })
}

fn check_sphere_sweep(
    spec: &DomainSpec,
    field: &ScalarField,
    rows: &mut Vec<SweepRow>,
) -> Result<CheckResult, StageError> {
    let Some((center, lo, hi)) = sphere_band(spec, field.grid().h) else {
        return Ok(CheckResult {
            name: CheckKind::SphereSweep,
            status: CheckStatus::Skipped,
            detail: json!({"reason": "no moving-sphere band for this variant at this resolution"}),
        });
    };
    let sweep = stage(
        "sphere-sweep",
        sweep_sphere(field, center, (lo, hi), DEFAULT_SWEEP_STEPS, ExpectedSign::Negative),
    )?;
    rows.extend(sweep.reports.iter().map(SweepRow::from));
    let ok = sweep.first_violation.is_none();
    Ok(CheckResult {
        name: CheckKind::SphereSweep,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail: json!({"sweeps": [sweep_detail("sphere", center, &sweep)]}),
    })
}

fn write_contours(out_dir: &Path, field: &ScalarField) -> Result<(), StageError> {
    let max = field.max_value();
    // a flat field has no interior level sets
    let levels: Vec<f64> = if max > 0.0 {
        (1..=8).map(|j| max * j as f64 / 9.0).collect()
    } else {
        Vec::new()
    };
    let curves = stage("contours", annulus_core::analysis::level_sets(field, &levels))?;
    write_artifact(out_dir, "contours.csv", |w| {
        writeln!(w, "curve_id,x,y,level")?;
        for (id, c) in curves.iter().enumerate() {
            for p in &c.points {
                writeln!(w, "{id},{:.16e},{:.16e},{:.16e}", p.x, p.y, c.level)?;
            }
        }
        Ok(())
    })
}

fn write_curves_csv<W: std::io::Write>(mut w: W, curves: &[NodalCurve]) -> std::io::Result<()> {
    writeln!(w, "curve_id,x,y")?;
    for (id, c) in curves.iter().enumerate() {
        for p in &c.points {
            writeln!(w, "{id},{:.16e},{:.16e}", p.x, p.y)?;
        }
    }
    Ok(())
}

fn write_artifact<F>(out_dir: &Path, name: &str, f: F) -> Result<(), StageError>
where
    F: FnOnce(&mut std::io::BufWriter<fs::File>) -> std::io::Result<()>,
{
    let path = out_dir.join(name);
    let inner = || -> std::io::Result<()> {
        let mut w = std::io::BufWriter::new(fs::File::create(&path)?);
        f(&mut w)?;
        w.flush()
    };
    inner().map_err(|e| StageError {
        stage: "artifacts",
        non_convergence: false,
        source: anyhow::Error::new(e).context(format!("writing {}", path.display())),
    })
}

fn write_json<T: serde::Serialize>(out_dir: &Path, name: &str, value: &T) -> Result<(), StageError> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    write_artifact(out_dir, name, |w| {
        w.write_all(text.as_bytes())?;
        writeln!(w)
    })
}
