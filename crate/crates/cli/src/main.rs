//! `polyflow`: simulate polygon shortening flows, replay invariant checks on
//! saved trajectories, reproduce the shipped figures and run the randomized
//! validation suite.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use polyflow::analysis::{
    check_area_monotone, check_convexity_preservation, check_ellipse_convergence,
    check_perimeter_monotone, check_star_preservation, AnalysisError, CheckReport,
};
use polyflow::geometry::{classify_convexity, classify_star, is_simple, ConvexityKind, StarKind};
use polyflow::io::csv::{read_trajectory_csv, write_trajectory_csv};
use polyflow::io::scenario::{OutputKind, Scenario};
use polyflow::io::svg::{render_svg, SvgOptions};
use polyflow::reproduce::{reproduce, Figure};
use polyflow::spectral::{decompose, eigenvalues};
use polyflow::validate::{run_validation, ValidationConfig};
use polyflow::{FlowSpec, Termination, Trajectory};

#[derive(Debug, Parser)]
#[command(name = "polyflow", version, about = "Polygon shortening flows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario file and write its outputs.
    Simulate(SimulateArgs),
    /// Print the eigenvalues of the linear scheme, and modal magnitudes for a scenario.
    Spectrum(SpectrumArgs),
    /// Replay invariant checks on a saved trajectory CSV.
    Analyze(AnalyzeArgs),
    /// Regenerate the artifacts of a shipped figure.
    Reproduce(ReproduceArgs),
    /// Run the randomized invariant suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FlowArg {
    Linear,
    MengerMelnikov,
    /// Unit-speed bisector flow.
    Bisector,
    /// Bisector flow with speeds matched to the linear field.
    BisectorMatched,
}

impl FlowArg {
    fn spec(self) -> FlowSpec {
        match self {
            FlowArg::Linear => FlowSpec::Linear,
            FlowArg::MengerMelnikov => FlowSpec::MengerMelnikov,
            FlowArg::Bisector => FlowSpec::bisector_unit(1.0),
            FlowArg::BisectorMatched => FlowSpec::bisector_norm_matched(),
        }
    }
}

#[derive(Debug, clap::Args)]
struct SimulateArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, value_enum)]
    flow: Option<FlowArg>,
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    t_end: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
    #[arg(long)]
    out_report: Option<PathBuf>,
    /// Where outputs listed in the scenario go when no explicit path is given.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, clap::Args)]
#[group(required = true, multiple = false)]
struct SpectrumArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    scenario: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckArg {
    Star,
    Convex,
    Perimeter,
    Area,
    Ellipse,
}

#[derive(Debug, clap::Args)]
struct AnalyzeArgs {
    #[arg(long)]
    csv: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "perimeter")]
    checks: Vec<CheckArg>,
    /// Normalized time from which the ellipse residual must not increase.
    #[arg(long, default_value_t = 1.0)]
    tau_min: f64,
    /// Also write the reports as JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig7,
    Fig8,
    Fig9,
    Fig10,
}

impl From<FigureArg> for Figure {
    fn from(f: FigureArg) -> Self {
        match f {
            FigureArg::Fig7 => Figure::Fig7,
            FigureArg::Fig8 => Figure::Fig8,
            FigureArg::Fig9 => Figure::Fig9,
            FigureArg::Fig10 => Figure::Fig10,
        }
    }
}

#[derive(Debug, clap::Args)]
struct ReproduceArgs {
    #[arg(value_enum)]
    figure: FigureArg,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, clap::Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 100)]
    ensemble_size: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
}

/// Whether every check that ran passed.
enum Outcome {
    Pass,
    Fail,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Analyze(args) => analyze(args),
        Command::Reproduce(args) => reproduce_figure(args),
        Command::Validate(args) => validate(args),
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            ExitCode::from(2)
        }
    }
}

/// The error chain joined by `: `, skipping causes the previous message
/// already ends with.
fn describe(e: &anyhow::Error) -> String {
    let mut text = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !text.ends_with(&msg) {
            if !text.is_empty() {
                text.push_str(": ");
            }
            text.push_str(&msg);
        }
    }
    text
}

/// Writes to standard output, treating a closed pipe as a normal exit.
fn emit(text: &str) -> Result<()> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e).context("writing output"),
        _ => Ok(()),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

/// Checks whose preconditions the initial state meets.
fn applicable_checks(traj: &Trajectory) -> Vec<CheckReport> {
    let p = traj.initial();
    let mut reports = Vec::new();
    reports.extend(check_perimeter_monotone(traj));
    if classify_star(p).kind != StarKind::NotStar {
        reports.extend(check_star_preservation(traj));
    }
    if classify_convexity(p).kind != ConvexityKind::NotConvex {
        reports.extend(check_convexity_preservation(traj));
    }
    if is_simple(p.vertices()) {
        reports.extend(check_area_monotone(traj));
    }
    reports
}

fn simulate(args: SimulateArgs) -> Result<Outcome> {
    let mut scenario = Scenario::load(&args.scenario)?;
    if let Some(flow) = args.flow {
        scenario.flow = flow.spec();
    }
    if let Some(dt) = args.dt {
        scenario.sim.dt = dt;
    }
    if let Some(t_end) = args.t_end {
        scenario.sim.t_end = t_end;
    }
    if let Some(seed) = args.seed {
        scenario.seed = seed;
    }
    let traj = scenario
        .run()
        .with_context(|| format!("running {}", args.scenario.display()))?;

    let default_path = |kind: OutputKind, ext: &str| {
        scenario
            .wants(kind)
            .then(|| args.out_dir.join(format!("{}.{ext}", scenario.name)))
    };
    if let Some(path) = args
        .out_csv
        .or_else(|| default_path(OutputKind::Csv, "csv"))
    {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        }
        write_trajectory_csv(&traj, &path)?;
    }
    if let Some(path) = args
        .out_svg
        .or_else(|| default_path(OutputKind::Svg, "svg"))
    {
        write_file(&path, &render_svg(&traj, &SvgOptions::default()))?;
    }
    if let Some(path) = args
        .out_report
        .or_else(|| default_path(OutputKind::ReportJson, "report.json"))
    {
        let report = serde_json::json!({
            "scenario": scenario.name,
            "flow": scenario.flow.name(),
            "termination": traj.termination.as_str(),
            "final_time": traj.final_time(),
            "samples": traj.len(),
            "checks": applicable_checks(&traj),
        });
        write_file(&path, &(serde_json::to_string_pretty(&report)? + "\n"))?;
    }

    emit(&format!(
        "{}: {} flow, {} samples, termination {} at t = {:.6}\n",
        scenario.name,
        scenario.flow.name(),
        traj.len(),
        traj.termination.as_str(),
        traj.final_time()
    ))?;
    if traj.termination == Termination::Degenerate {
        eprintln!("run ended on a degenerate configuration");
        return Ok(Outcome::Fail);
    }
    Ok(Outcome::Pass)
}

/// Prints `-0` as `0` so tables do not depend on the sign of zero.
fn fmt_value(x: f64) -> String {
    let s = format!("{x:.12}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn spectrum(args: SpectrumArgs) -> Result<Outcome> {
    let mut table = String::new();
    match (args.n, args.scenario) {
        (Some(n), _) => {
            table.push_str("i\tlambda\n");
            for (i, l) in eigenvalues(n)?.iter().enumerate() {
                writeln!(table, "{}\t{}", i + 1, fmt_value(*l))?;
            }
        }
        (None, Some(path)) => {
            let scenario = Scenario::load(&path)?;
            let d = decompose(&scenario.initial_polygon()?);
            table.push_str("i\tlambda\t|c|\n");
            for (i, (l, c)) in d.eigenvalues.iter().zip(&d.modal_coeffs).enumerate() {
                writeln!(
                    table,
                    "{}\t{}\t{}",
                    i + 1,
                    fmt_value(*l),
                    fmt_value(c.norm())
                )?;
            }
        }
        (None, None) => bail!("either --n or --scenario is required"),
    }
    emit(&table)?;
    Ok(Outcome::Pass)
}

fn run_check(
    check: CheckArg,
    traj: &Trajectory,
    tau_min: f64,
) -> Result<CheckReport, AnalysisError> {
    match check {
        CheckArg::Star => check_star_preservation(traj),
        CheckArg::Convex => check_convexity_preservation(traj),
        CheckArg::Perimeter => check_perimeter_monotone(traj),
        CheckArg::Area => check_area_monotone(traj),
        CheckArg::Ellipse => check_ellipse_convergence(traj, tau_min),
    }
}

fn analyze(args: AnalyzeArgs) -> Result<Outcome> {
    let traj = read_trajectory_csv(&args.csv)?;
    let mut checks = args.checks.clone();
    checks.dedup();
    let mut all_passed = true;
    let mut reports = Vec::new();
    for check in checks {
        match run_check(check, &traj, args.tau_min) {
            Ok(report) => {
                emit(&format!("{report}\n"))?;
                all_passed &= report.passed;
                reports.push(report);
            }
            Err(e) => {
                eprintln!("{check:?} check not applicable: {e}");
                all_passed = false;
            }
        }
    }
    if let Some(path) = args.report {
        write_file(&path, &(serde_json::to_string_pretty(&reports)? + "\n"))?;
    }
    Ok(if all_passed {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn reproduce_figure(args: ReproduceArgs) -> Result<Outcome> {
    let out = reproduce(args.figure.into())?;
    for artifact in &out.artifacts {
        let path = args.out_dir.join(&artifact.file_name);
        write_file(&path, &artifact.contents)?;
        eprintln!("wrote {}", path.display());
    }
    emit(
        &out.summary
            .iter()
            .map(|l| format!("{l}\n"))
            .collect::<String>(),
    )?;
    Ok(Outcome::Pass)
}

fn validate(args: ValidateArgs) -> Result<Outcome> {
    if args.ensemble_size == 0 {
        bail!("--ensemble-size must be at least 1");
    }
    let report = run_validation(&ValidationConfig {
        ensemble_size: args.ensemble_size,
        seed: args.seed,
    });
    for s in &report.suites {
        eprintln!(
            "{:<28} {:<4} members={:<5} violations={:<3} worst_margin={:.3e}",
            s.name,
            if s.passed { "PASS" } else { "FAIL" },
            s.members,
            s.violations,
            s.worst_margin
        );
    }
    let json = report.to_json();
    match args.report {
        Some(path) => write_file(&path, &json)?,
        None => emit(&json)?,
    }
    Ok(if report.passed {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}
