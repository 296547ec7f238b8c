//! Command-line front end: argument parsing, the five commands, and their
//! file formats.
//!
//! Exit codes: 0 success, 1 a hard audit failed, 2 malformed input, 3 a
//! runtime failure (partial output is left on disk).

pub mod config;
pub mod io;
pub mod plot;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::diagnostics::{default_window, fit_power_law};
use crate::dyson::{integrate, self_induction, CoreModel, FilamentPairState};
use crate::error::Error;
use crate::theory_checks::{beta0, hard_pass, inequality_audits, kernel_audits, AuditReport};
use crate::vortex_method::{run_with, ParticleSystem};

pub use config::RunConfig;
pub use plot::Scale;

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Environment variable that overrides `--threads`.
pub const THREADS_ENV: &str = "AXIRING_THREADS";

#[derive(Debug, Parser)]
#[command(name = "axiring", version, about = "Axisymmetric vortex-ring pair simulations and audits")]
pub struct Cli {
    /// Worker threads for velocity evaluation (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a vortex-blob simulation from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Integrate the thin-filament ring-pair model.
    Dyson(DysonArgs),
    /// Run kernel and/or inequality audits and write a JSON report.
    Audit(AuditArgs),
    /// Fit a power law to one column of a CSV time series.
    Fit(FitArgs),
    /// Draw CSV columns against t as an SVG chart.
    Plot(PlotArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DysonArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: f64,
    #[arg(long)]
    pub r0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub z0: f64,
    #[arg(long)]
    pub a0: f64,
    #[arg(long)]
    pub dt: f64,
    #[arg(long)]
    pub t_max: f64,
    #[arg(long, value_enum, default_value_t = CoreModelArg::Fixed)]
    pub core_model: CoreModelArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoreModelArg {
    Fixed,
    Shrinking,
}

impl From<CoreModelArg> for CoreModel {
    fn from(m: CoreModelArg) -> Self {
        match m {
            CoreModelArg::Fixed => CoreModel::Fixed,
            CoreModelArg::Shrinking => CoreModel::Shrinking,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Kernels,
    Inequalities,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    #[arg(value_enum)]
    pub which: Which,
    /// Config whose initial state is audited.
    #[arg(long, conflicts_with = "snapshot")]
    pub config: Option<PathBuf>,
    /// Snapshot file to audit.
    #[arg(long)]
    pub snapshot: Option<PathBuf>,
    /// Blob radius, overriding the one recorded in the snapshot.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Seed for sampled audits (default: the config's seed, else 0).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Report path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    pub csv: PathBuf,
    #[arg(long)]
    pub column: String,
    /// Window start (default: midpoint of the series).
    #[arg(long, allow_negative_numbers = true)]
    pub tmin: Option<f64>,
    /// Window end (default: last time).
    #[arg(long)]
    pub tmax: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Loglog,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    pub csv: PathBuf,
    /// Column to draw; repeat for several.
    #[arg(long, required = true)]
    pub column: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    pub scale: ScaleArg,
}

/// A failed command: exit code plus message.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_USAGE,
            message: msg.to_string(),
        }
    }

    pub fn runtime(msg: impl std::fmt::Display) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: msg.to_string(),
        }
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Thread count from the flag and the environment; the environment wins.
pub fn resolve_threads(flag: Option<usize>, env: Option<&str>) -> std::result::Result<Option<usize>, CliError> {
    let n = match env.map(str::trim).filter(|s| !s.is_empty()) {
        Some(s) => Some(
            s.parse::<usize>()
                .map_err(|_| CliError::usage(format!("{THREADS_ENV}={s} is not a thread count")))?,
        ),
        None => flag,
    };
    if n == Some(0) {
        return Err(CliError::usage("thread count must be at least 1"));
    }
    Ok(n)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let mut text = e.render().to_string();
            if code == EXIT_USAGE && !text.contains("Usage:") {
                text += &format!("\n{}\n", Cli::command().render_usage());
            }
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let env = std::env::var(THREADS_ENV).ok();
    let result = resolve_threads(cli.threads, env.as_deref()).and_then(|threads| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(CliError::runtime)?;
        // Command output is buffered so the workers never touch the
        // caller's streams.
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let r = pool.install(|| dispatch(&cli.command, &mut out, &mut err));
        let _ = stdout.write_all(&out);
        let _ = stderr.write_all(&err);
        r
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cmd: &Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match cmd {
        Command::Simulate { config } => cmd_simulate(config, stdout, stderr),
        Command::Dyson(a) => cmd_dyson(a, stdout, stderr),
        Command::Audit(a) => cmd_audit(a, stdout),
        Command::Fit(a) => cmd_fit(a, stdout),
        Command::Plot(a) => cmd_plot(a),
    }
}

fn out_err(e: std::io::Error) -> CliError {
    CliError::runtime(e)
}

/// Runs a config, writing `series.csv` and `snapshots/snap_NNNNN.csv`.
pub fn cmd_simulate(config: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let cfg = RunConfig::load(config).map_err(|e| CliError::usage(format!("{}: {e}", config.display())))?;
    for w in cfg.warnings() {
        writeln!(stderr, "warning: {w}").map_err(out_err)?;
    }
    let system = cfg.initial_system().map_err(CliError::usage)?;
    let snap_dir = cfg.out_dir.join("snapshots");
    std::fs::create_dir_all(&snap_dir)
        .map_err(|e| CliError::usage(format!("cannot create {}: {e}", snap_dir.display())))?;
    let series_path = cfg.out_dir.join("series.csv");
    let mut series = io::SeriesWriter::create(&series_path)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", series_path.display())))?;
    let mut index = 0usize;
    let result = run_with(&system, cfg.run_params(), |state, record| {
        series.push(record)?;
        io::save_snapshot(&io::snapshot_path(&cfg.out_dir, index), state)?;
        index += 1;
        Ok(())
    });
    match result {
        Ok(summary) => {
            writeln!(
                stdout,
                "particles={} steps={} outputs={} reflections={} advisory_violations={}",
                system.len(),
                summary.steps,
                summary.outputs,
                summary.reflections,
                summary.advisory_violations
            )
            .map_err(out_err)?;
            if summary.advisory_violations > 0 {
                writeln!(
                    stderr,
                    "warning: dt exceeded 0.5*epsilon/max|u| on {} steps",
                    summary.advisory_violations
                )
                .map_err(out_err)?;
            }
            Ok(EXIT_OK)
        }
        Err(e) => Err(CliError::runtime(format!("run stopped after {index} outputs: {e}"))),
    }
}

/// Integrates the filament model and writes the Dyson CSV.
pub fn cmd_dyson(a: &DysonArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    for (name, v) in [("dt", a.dt), ("t-max", a.t_max)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::usage(format!("--{name} must be positive, got {v}")));
        }
    }
    let state = FilamentPairState::new(a.r0, a.z0, a.gamma, a.a0).map_err(CliError::usage)?;
    self_induction(a.r0, a.gamma, a.a0).map_err(CliError::usage)?;
    if state.thick_core() {
        writeln!(stderr, "warning: a0 > R0/10, the thin-core model is doubtful").map_err(out_err)?;
    }
    let run = integrate(&state, a.dt, a.t_max, a.core_model.into()).map_err(CliError::runtime)?;
    let file = std::fs::File::create(&a.out)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", a.out.display())))?;
    io::write_dyson(std::io::BufWriter::new(file), &run).map_err(CliError::runtime)?;
    let last = run.samples.last().copied();
    if let Some(s) = last {
        writeln!(
            stdout,
            "samples={} collision={} t={:?} R={:?} Z={:?} a={:?}",
            run.samples.len(),
            run.collision,
            s.t,
            s.r,
            s.z,
            s.a
        )
        .map_err(out_err)?;
    }
    Ok(EXIT_OK)
}

fn audit_input(a: &AuditArgs) -> std::result::Result<(ParticleSystem, u64), CliError> {
    if let Some(path) = &a.snapshot {
        if !path.exists() {
            return Err(CliError::usage(format!("snapshot {} not found", path.display())));
        }
        let s = io::load_snapshot(path, a.epsilon).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        return Ok((s, a.seed.unwrap_or(0)));
    }
    if let Some(path) = &a.config {
        let cfg = RunConfig::load(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let s = cfg.initial_system().map_err(CliError::usage)?;
        return Ok((s, a.seed.unwrap_or(cfg.seed)));
    }
    Err(CliError::usage("inequality audits need --snapshot or --config"))
}

/// Runs the selected audits. Exit 0 iff every hard audit passes.
pub fn cmd_audit(a: &AuditArgs, stdout: &mut dyn Write) -> CliResult {
    let mut reports: Vec<AuditReport> = Vec::new();
    let mut seed = a.seed.unwrap_or(0);
    let input = match a.which {
        Which::Kernels => None,
        Which::Inequalities | Which::All => Some(audit_input(a)?),
    };
    if let Some((_, s)) = &input {
        seed = *s;
    }
    if matches!(a.which, Which::Kernels | Which::All) {
        reports.extend(kernel_audits(seed).map_err(CliError::runtime)?);
    }
    if let Some((system, _)) = &input {
        // ξ₀ and the volumes are conserved, so the snapshot supplies its own
        // initial reciprocal norm.
        reports.extend(inequality_audits(system, &system.particles, seed).map_err(CliError::runtime)?);
    }
    let ok = hard_pass(&reports);
    let doc = json!({
        "which": format!("{:?}", a.which).to_lowercase(),
        "seed": seed,
        "hard_pass": ok,
        "audits": reports,
    });
    let text = serde_json::to_string_pretty(&doc).map_err(CliError::runtime)? + "\n";
    match &a.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::runtime(format!("{}: {e}", p.display())))?,
        None => stdout.write_all(text.as_bytes()).map_err(out_err)?,
    }
    Ok(if ok { EXIT_OK } else { EXIT_AUDIT_FAILED })
}

/// Fits `column ~ c t^k` and prints it next to the reference exponents.
pub fn cmd_fit(a: &FitArgs, stdout: &mut dyn Write) -> CliResult {
    let series = io::read_column(&a.csv, &a.column).map_err(CliError::usage)?;
    let default = default_window(&series).ok_or_else(|| CliError::usage("series is empty"))?;
    let window = (a.tmin.unwrap_or(default.0), a.tmax.unwrap_or(default.1));
    let fit = fit_power_law(&series, window).map_err(CliError::usage)?;
    let b0 = beta0(0.0).map_err(CliError::runtime)?;
    let mut text = String::from("exponent,prefactor,residual\n");
    text += &format!("{:?},{:?},{:?}\n", fit.exponent, fit.prefactor, fit.residual);
    text += "reference,value,exponent_minus_reference\n";
    for (name, v) in [("2/15", 2.0 / 15.0), ("1/15", 1.0 / 15.0), ("beta0(0)", b0), ("2", 2.0)] {
        text += &format!("{name},{v:?},{:?}\n", fit.exponent - v);
    }
    stdout.write_all(text.as_bytes()).map_err(out_err)?;
    Ok(EXIT_OK)
}

pub fn cmd_plot(a: &PlotArgs) -> CliResult {
    let mut series = Vec::new();
    for c in &a.column {
        let s = io::read_column(&a.csv, c).map_err(CliError::usage)?;
        series.push((c.clone(), s));
    }
    let scale = match a.scale {
        ScaleArg::Linear => Scale::Linear,
        ScaleArg::Loglog => Scale::LogLog,
    };
    let svg = plot::svg_chart(&series, scale).map_err(CliError::usage)?;
    std::fs::write(&a.out, svg).map_err(|e| CliError::runtime(format!("{}: {e}", a.out.display())))?;
    Ok(EXIT_OK)
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::runtime(e)
    }
}
