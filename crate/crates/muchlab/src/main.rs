//! Thin command-line front end over [`muchlab::lab`]: four subcommands
//! (`simulate`, `verify`, `fsurface`, `stability-sweep`), a `key = value`
//! config file mirroring the flags, CSV/JSON outputs, and the exit-code
//! contract 0 = all checks pass, 1 = check or integration failure,
//! 2 = usage error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use muchlab::field::{Grid, PeriodicField};
use muchlab::functionals::{fstats, FStats};
use muchlab::lab::config::FileConfig;
use muchlab::lab::fsurface::{tabulate, AxisRange, SurfaceSpec};
use muchlab::lab::io::{
    write_fields_csv, write_surface_csv, write_trajectory_csv, Summary,
};
use muchlab::lab::simulate::{run_simulate, InitKind, SimulateSpec};
use muchlab::lab::sweep::{run_sweep, PerturbationKind, SweepSpec};
use muchlab::lab::verify::{run_verify, Suite, VerifyParams};
use muchlab::lab::{CheckResult, DistanceMode, LabError};
use muchlab::solver::{RunStatus, SolverConfig};

#[derive(Parser)]
#[command(
    name = "muchlab",
    version,
    about = "Pseudospectral solver and verification lab for the mu-Camassa-Holm equation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve initial data and write a trajectory CSV plus a JSON summary.
    Simulate(SimulateArgs),
    /// Run a verification suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Tabulate the Lyapunov surface F(M, m) to CSV.
    Fsurface(FsurfaceArgs),
    /// Sweep perturbation sizes and report sup orbital distances.
    StabilitySweep(SweepArgs),
}

/// Flags shared by every subcommand; unset values fall back to the config
/// file, then to per-command defaults.
#[derive(Args, Debug, Clone)]
struct CommonArgs {
    /// Grid size (power of two >= 16).
    #[arg(long)]
    n: Option<usize>,
    /// Time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Final time.
    #[arg(long)]
    t_end: Option<f64>,
    /// Spectral filter strength (0 disables).
    #[arg(long)]
    filter_alpha: Option<f64>,
    /// Spectral filter order (even, >= 4).
    #[arg(long)]
    filter_order: Option<u32>,
    /// Dealias quadratic products by the 2/3 rule.
    #[arg(long)]
    dealias: Option<bool>,
    /// Root seed for all randomness.
    #[arg(long)]
    seed: Option<u64>,
    /// Tolerance gate (suite residuals, drift checks).
    #[arg(long)]
    tol: Option<f64>,
    /// Primary output path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `key = value` config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Record every k-th step.
    #[arg(long)]
    record_every: Option<usize>,
}

struct Resolved {
    n: usize,
    dt: f64,
    t_end: f64,
    filter_alpha: Option<f64>,
    filter_order: u32,
    dealias: bool,
    seed: u64,
    tol: f64,
    out: Option<PathBuf>,
    record_every: usize,
}

impl CommonArgs {
    fn resolve(&self) -> Result<Resolved, LabError> {
        let file = match &self.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let out = self
            .out
            .clone()
            .or_else(|| file.get_string("out").map(PathBuf::from));
        Ok(Resolved {
            n: self.n.or(file.get("n")?).unwrap_or(512),
            dt: self.dt.or(file.get("dt")?).unwrap_or(2.5e-4),
            t_end: self.t_end.or(file.get("t_end")?).unwrap_or(1.0),
            filter_alpha: self.filter_alpha.or(file.get("filter_alpha")?),
            filter_order: self.filter_order.or(file.get("filter_order")?).unwrap_or(8),
            dealias: self.dealias.or(file.get("dealias")?).unwrap_or(true),
            seed: self.seed.or(file.get("seed")?).unwrap_or(7),
            tol: self.tol.or(file.get("tol")?).unwrap_or(1e-6),
            out,
            record_every: self.record_every.or(file.get("record_every")?).unwrap_or(20),
        })
    }
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Initial data family: peakon | constant | fourier.
    #[arg(long, default_value = "peakon")]
    init: String,
    /// Peakon speed (and the orbit the distance column refers to).
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Peakon phase.
    #[arg(long, default_value_t = 0.0)]
    xi0: f64,
    /// Constant value for --init constant.
    #[arg(long, default_value_t = 2.0)]
    value: f64,
    /// Mean level for --init fourier.
    #[arg(long, default_value_t = 2.0)]
    mean: f64,
    /// Mode number for --init fourier.
    #[arg(long, default_value_t = 1)]
    mode: u32,
    /// Amplitude for --init fourier.
    #[arg(long, default_value_t = 0.1)]
    amp: f64,
    /// Also write field snapshots (t, x, u) to this CSV.
    #[arg(long)]
    fields_out: Option<PathBuf>,
    /// Measure dist_to_orbit by global minimization instead of the argmax
    /// prescription.
    #[arg(long, default_value_t = false)]
    minimize_distance: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Suite: constants | identities | inequalities | all.
    #[arg(long, default_value = "all")]
    suite: String,
    /// Trial count (overrides the per-suite defaults 200/1000).
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args, Debug)]
struct FsurfaceArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Stats source: peakon | constant | field.
    #[arg(long, default_value = "peakon")]
    source: String,
    /// Peakon speed (or constant level) for the stats.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Sample file (one value per line) for --source field.
    #[arg(long)]
    field: Option<PathBuf>,
    /// M axis as lo:hi:count.
    #[arg(long, default_value = "0.9:1.1:41")]
    max_range: String,
    /// m axis as lo:hi:count.
    #[arg(long, default_value = "0.8:1.0:41")]
    min_range: String,
    /// Exact point query "M,m"; value lands in the summary as f_at.
    #[arg(long)]
    at: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated perturbation sizes (H1 norm), ascending.
    #[arg(long, default_value = "1e-3,3e-3,1e-2")]
    deltas: String,
    /// Perturbation: single-mode | random-band | amplitude-scale.
    #[arg(long, default_value = "single-mode")]
    perturbation: String,
    /// Peakon speed.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Fsurface(args) => cmd_fsurface(args),
        Command::StabilitySweep(args) => cmd_sweep(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            usage_exit_code(&err)
        }
    }
}

fn usage_exit_code(err: &LabError) -> ExitCode {
    match err {
        LabError::Io(_) => ExitCode::from(1),
        _ => ExitCode::from(2),
    }
}

fn print_checks(checks: &[CheckResult]) {
    println!(
        "{:<44} {:>14} {:>14} {:>6}",
        "check", "measured", "bound", "pass"
    );
    for c in checks {
        println!(
            "{:<44} {:>14.6e} {:>14.6e} {:>6}",
            c.name,
            c.measured,
            c.bound,
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
}

fn summary_path(csv: &Path) -> PathBuf {
    csv.with_extension("summary.json")
}

fn cmd_simulate(args: SimulateArgs) -> Result<ExitCode, LabError> {
    let r = args.common.resolve()?;
    let init = match args.init.as_str() {
        "peakon" => InitKind::Peakon {
            c: args.c,
            xi0: args.xi0,
        },
        "constant" => InitKind::Constant { value: args.value },
        "fourier" => InitKind::Fourier {
            mean: args.mean,
            mode: args.mode,
            amp: args.amp,
        },
        other => {
            return Err(LabError::BadConfig(format!(
                "unknown init '{other}' (expected peakon, constant, or fourier)"
            )))
        }
    };
    // Filter defaults: off for smooth data, alpha = 36 for the peakon.
    let filter_alpha = r.filter_alpha.unwrap_or(match init {
        InitKind::Peakon { .. } => 36.0,
        _ => 0.0,
    });
    let spec = SimulateSpec {
        init,
        solver: SolverConfig {
            n: r.n,
            dt: r.dt,
            t_end: r.t_end,
            dealias: r.dealias,
            filter_alpha,
            filter_order: r.filter_order,
            record_every: r.record_every,
            breaking_factor: 50.0,
        },
        orbit_speed: args.c,
        tol: r.tol,
        distance_mode: if args.minimize_distance {
            DistanceMode::Minimize
        } else {
            DistanceMode::ArgmaxPrescription
        },
    };
    let outcome = run_simulate(&spec)?;

    let csv = r.out.unwrap_or_else(|| PathBuf::from("trajectory.csv"));
    write_trajectory_csv(&csv, &outcome.record, &outcome.orbit)?;
    if let Some(fields_path) = &args.fields_out {
        write_fields_csv(fields_path, &outcome.record)?;
    }

    let mut summary = Summary::new(
        "simulate",
        json!({
            "init": format!("{:?}", spec.init),
            "n": spec.solver.n,
            "dt": spec.solver.dt,
            "t_end": spec.solver.t_end,
            "dealias": spec.solver.dealias,
            "filter_alpha": spec.solver.filter_alpha,
            "filter_order": spec.solver.filter_order,
            "record_every": spec.solver.record_every,
            "tol": spec.tol,
            "out": csv,
        }),
    );
    summary.checks = outcome.checks.clone();
    summary.sup_orbital_distance = Some(outcome.sup_orbital_distance);
    summary.breaking = Some(outcome.breaking());
    let (h1_drift, h2_drift) = outcome.record.relative_drift();
    summary.extra.insert("h0_drift".into(), json!(outcome.record.h0_drift()));
    summary.extra.insert("h1_rel_drift".into(), json!(h1_drift));
    summary.extra.insert("h2_rel_drift".into(), json!(h2_drift));
    if let RunStatus::NonFinite { t } = outcome.record.status {
        summary.extra.insert("failed_at".into(), json!(t));
    }
    summary.write(&summary_path(&csv))?;

    print_checks(&outcome.checks);
    println!(
        "sup dist_to_orbit = {:.6e}, breaking = {}, wrote {} and {}",
        outcome.sup_orbital_distance,
        outcome.breaking(),
        csv.display(),
        summary_path(&csv).display()
    );

    if outcome.failed() {
        eprintln!("integration failed (non-finite values); see summary");
        return Ok(ExitCode::from(1));
    }
    Ok(if outcome.all_checks_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, LabError> {
    let r = args.common.resolve()?;
    let params = VerifyParams {
        suite: Suite::from_str(&args.suite)?,
        trials: args.trials,
        seed: r.seed,
        tol: r.tol,
        n: r.n,
    };
    let checks = run_verify(&params)?;
    print_checks(&checks);
    let all_pass = checks.iter().all(|c| c.pass);

    if let Some(path) = &r.out {
        let mut summary = Summary::new(
            "verify",
            json!({
                "suite": args.suite,
                "trials": args.trials,
                "seed": r.seed,
                "tol": r.tol,
                "n": r.n,
            }),
        );
        summary.checks = checks;
        summary.write(path)?;
    }
    Ok(if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn parse_axis(text: &str) -> Result<AxisRange, LabError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(LabError::BadConfig(format!(
            "range '{text}' must be lo:hi:count"
        )));
    }
    let lo = parts[0]
        .parse()
        .map_err(|_| LabError::BadConfig(format!("bad range lower bound '{}'", parts[0])))?;
    let hi = parts[1]
        .parse()
        .map_err(|_| LabError::BadConfig(format!("bad range upper bound '{}'", parts[1])))?;
    let count = parts[2]
        .parse()
        .map_err(|_| LabError::BadConfig(format!("bad range count '{}'", parts[2])))?;
    Ok(AxisRange { lo, hi, count })
}

fn parse_pair(text: &str) -> Result<(f64, f64), LabError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(LabError::BadConfig(format!("point '{text}' must be M,m")));
    }
    let a = parts[0]
        .trim()
        .parse()
        .map_err(|_| LabError::BadConfig(format!("bad value '{}'", parts[0])))?;
    let b = parts[1]
        .trim()
        .parse()
        .map_err(|_| LabError::BadConfig(format!("bad value '{}'", parts[1])))?;
    Ok((a, b))
}

fn load_field_file(path: &Path) -> Result<PeriodicField, LabError> {
    let text = std::fs::read_to_string(path)?;
    let values: Result<Vec<f64>, _> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::parse)
        .collect();
    let values =
        values.map_err(|e| LabError::BadConfig(format!("field file {path:?}: {e}")))?;
    let grid = Grid::new(values.len())?;
    Ok(PeriodicField::from_values(grid, values)?)
}

fn cmd_fsurface(args: FsurfaceArgs) -> Result<ExitCode, LabError> {
    let r = args.common.resolve()?;
    let stats = match args.source.as_str() {
        "peakon" => FStats::peakon(args.c),
        "constant" => FStats::constant(args.c),
        "field" => {
            let path = args.field.as_ref().ok_or_else(|| {
                LabError::BadConfig("--source field requires --field <path>".into())
            })?;
            fstats(&load_field_file(path)?)
        }
        other => {
            return Err(LabError::BadConfig(format!(
                "unknown source '{other}' (expected peakon, constant, or field)"
            )))
        }
    };
    let spec = SurfaceSpec {
        stats,
        max_range: parse_axis(&args.max_range)?,
        min_range: parse_axis(&args.min_range)?,
        at: args.at.as_deref().map(parse_pair).transpose()?,
    };
    let result = tabulate(&spec)?;

    let csv = r.out.unwrap_or_else(|| PathBuf::from("fsurface.csv"));
    write_surface_csv(&csv, &result.samples)?;

    let mut summary = Summary::new(
        "fsurface",
        json!({
            "source": args.source,
            "c": args.c,
            "max_range": args.max_range,
            "min_range": args.min_range,
            "stats": {
                "h0": stats.h0, "h1": stats.h1, "h2": stats.h2, "l2sq": stats.l2sq,
            },
            "out": csv,
        }),
    );
    summary
        .extra
        .insert("f_peak".into(), json!(result.peak.f));
    summary.extra.insert(
        "f_peak_at".into(),
        json!([result.peak.max, result.peak.min]),
    );
    if let Some(f_at) = result.f_at {
        summary.extra.insert("f_at".into(), json!(f_at));
    }
    summary.write(&summary_path(&csv))?;

    println!(
        "F peak {:.6e} at (M, m) = ({:.6}, {:.6}); wrote {} rows to {}",
        result.peak.f,
        result.peak.max,
        result.peak.min,
        result.samples.len(),
        csv.display()
    );
    if let Some(f_at) = result.f_at {
        println!("F at query point = {f_at:.12e}");
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_sweep(args: SweepArgs) -> Result<ExitCode, LabError> {
    let r = args.common.resolve()?;
    let deltas: Result<Vec<f64>, _> = args
        .deltas
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect();
    let deltas =
        deltas.map_err(|e| LabError::BadConfig(format!("bad --deltas list: {e}")))?;
    let spec = SweepSpec {
        deltas,
        kind: PerturbationKind::from_str(&args.perturbation)?,
        seed: r.seed,
        solver: SolverConfig {
            n: r.n,
            dt: if args.common.dt.is_none() { 5e-4 } else { r.dt },
            t_end: r.t_end,
            dealias: r.dealias,
            filter_alpha: r.filter_alpha.unwrap_or(36.0),
            filter_order: r.filter_order,
            record_every: r.record_every,
            breaking_factor: 50.0,
        },
        c: args.c,
        distance_mode: DistanceMode::ArgmaxPrescription,
    };
    let report = run_sweep(&spec)?;

    println!(
        "{:>10} {:>14} {:>14} {:>14} {:>10}  verdict",
        "delta", "sup dist", "sup |M-c|", "chain defect", "D/sqrt(d)"
    );
    for o in &report.outcomes {
        println!(
            "{:>10.3e} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.4}  {}",
            o.delta, o.sup_dist, o.sup_crest_dev, o.chain_max_defect, o.dist_ratio, o.verdict
        );
    }
    println!("sup distance nondecreasing in delta: {}", report.monotone);

    let out = r.out.unwrap_or_else(|| PathBuf::from("sweep.json"));
    let mut summary = Summary::new(
        "stability-sweep",
        json!({
            "deltas": args.deltas,
            "perturbation": args.perturbation,
            "c": args.c,
            "seed": r.seed,
            "n": spec.solver.n,
            "dt": spec.solver.dt,
            "t_end": spec.solver.t_end,
            "filter_alpha": spec.solver.filter_alpha,
            "filter_order": spec.solver.filter_order,
        }),
    );
    for o in &report.outcomes {
        summary.checks.push(CheckResult::residual(
            &format!("sweep/chain-defect-delta-{:.0e}", o.delta),
            o.chain_max_defect,
            muchlab::lab::sweep::CHAIN_SLACK,
        ));
    }
    summary.extra.insert(
        "outcomes".into(),
        serde_json::to_value(&report.outcomes)
            .map_err(|e| LabError::BadConfig(e.to_string()))?,
    );
    summary.extra.insert("monotone".into(), json!(report.monotone));
    let sup = report
        .outcomes
        .iter()
        .fold(0.0_f64, |a, o| a.max(o.sup_dist));
    summary.sup_orbital_distance = Some(sup);
    summary.breaking = Some(
        report
            .outcomes
            .iter()
            .any(|o| o.verdict.contains("breaking")),
    );
    summary.write(&out)?;
    println!("wrote {}", out.display());

    let ok = report
        .outcomes
        .iter()
        .all(|o| o.chain_ok && !o.verdict.contains("non-finite"));
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
