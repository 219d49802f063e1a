//! `annulus-critic`: solve Δu + f(u) = 0 on annular domains, locate and
//! classify the critical points, and verify the predicted counts,
//! placement, exclusion regions and reflection signs.

mod config;
mod presets;
mod report;
mod run;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::parse_config;
use run::StageError;

/// Exit codes: 0 all enabled checks pass, 1 a check failed, 2 configuration
/// error, 3 solver non-convergence.
#[derive(Parser)]
#[command(
    name = "annulus-critic",
    about = "Critical points of semilinear Dirichlet problems on annular domains",
    long_about = "Solves Δu + f(u) = 0 with u = 0 on the boundary of a parametrized annular \
                  domain, then detects, classifies, counts and localizes the critical points \
                  of u, checking counts per symmetry axis, Morse balance, exclusion-region \
                  containment, nodal-set structure and moving-plane/moving-sphere sign sweeps.\n\n\
                  Omitted tolerances default to: solver_tol = 1e-10, tau_g = 1e-8 times the max \
                  nodal gradient norm, tau_d = 3 grid cells. The environment variable \
                  ANNULUS_CRITIC_THREADS caps internal parallelism."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the solve -> analyze -> verify pipeline and write artifacts.
    Run(RunArgs),
    /// Run the concentric-to-eccentric instability sweep.
    Sweep(SweepArgs),
    /// Parse and validate a config file without running anything.
    Validate {
        /// Path to the experiment config JSON.
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Path to the experiment config JSON (exclusive with --preset).
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Compiled-in preset: example1 (petal ellipse 6x4 minus unit disk) or
    /// example2 (eccentric annulus a=0.3, r=0.2, R=0.8), both f = 1, n = 192.
    #[arg(long)]
    preset: Option<String>,
    /// Output directory (default: ./annulus_out, or the config's out_dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the grid resolution.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep preset; only "instability" exists (r0=0.2, R0=0.8,
    /// offsets 0, 0.02, 0.05, 0.1, 0.3, f = 1, n = 192).
    #[arg(long, default_value = "instability")]
    preset: String,
    /// Comma-separated inner-center offsets overriding the preset's.
    #[arg(long, value_delimiter = ',')]
    offsets: Option<Vec<f64>>,
    /// Output directory (default ./annulus_out).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the grid resolution.
    #[arg(long)]
    n: Option<usize>,
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // 2 = configuration (parse/validation/degenerate grid),
            // 3 = solver non-convergence, 1 = anything mid-pipeline
            let code = match e.downcast_ref::<StageError>() {
                Some(stage) if stage.non_convergence => 3,
                Some(stage) if stage.stage == "grid" => 2,
                Some(_) => 1,
                None => 2,
            };
            ExitCode::from(code)
        }
    }
}

fn init_thread_pool() {
    if let Ok(value) = std::env::var("ANNULUS_CRITIC_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            if threads >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .build_global();
            }
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Run(args) => {
            let mut config = match (&args.config, &args.preset) {
                (Some(path), None) => parse_config(path)?,
                (None, Some(name)) => presets::run_preset(name).ok_or_else(|| {
                    anyhow::anyhow!(
                        "unknown preset `{name}`; available: {}",
                        presets::PRESET_NAMES.join(", ")
                    )
                })?,
                _ => anyhow::bail!("exactly one of --config or --preset is required"),
            };
            if let Some(n) = args.n {
                config.n = n;
                let violations = config.validate();
                if !violations.is_empty() {
                    anyhow::bail!("invalid config after --n override: {}", violations.join("; "));
                }
            }
            let out_dir = args
                .out
                .or_else(|| config.out_dir.clone())
                .unwrap_or_else(|| PathBuf::from("annulus_out"));
            let outcome = run::run(&config, &out_dir)?;
            println!(
                "wrote {} ({} critical points{})",
                out_dir.display(),
                outcome.n_points,
                if outcome.has_ring { ", critical ring" } else { "" }
            );
            Ok(if outcome.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Sweep(args) => {
            if args.preset != "instability" {
                anyhow::bail!("unknown sweep preset `{}`; only `instability` exists", args.preset);
            }
            let mut params = presets::instability_preset();
            if let Some(offsets) = args.offsets {
                params.offsets = offsets;
            }
            if let Some(n) = args.n {
                params.n = n;
            }
            if params.n < 32 {
                anyhow::bail!("n >= 32 violated (n = {})", params.n);
            }
            let report = sweep::instability_sweep(&params)?;
            let out_dir = args.out.unwrap_or_else(|| PathBuf::from("annulus_out"));
            sweep::write_sweep_report(&report, &out_dir)?;
            for rec in &report.offsets {
                match rec.kind {
                    "ring" => println!(
                        "a={:<5} critical ring, radius {:.5}",
                        rec.a,
                        rec.ring_radius.unwrap_or(f64::NAN)
                    ),
                    _ => println!("a={:<5} {} isolated points", rec.a, rec.n_points),
                }
            }
            Ok(if report.collapse_confirmed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Validate { config } => {
            let parsed = parse_config(&config)?;
            println!(
                "valid: {} with {:?}, n = {}",
                parsed.domain.variant_name(),
                parsed.nonlinearity,
                parsed.n
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}
