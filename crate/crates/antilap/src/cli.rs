//! Command-line front end: coefficient queries, solution construction and
//! evaluation, verification suites, distributional pairings, asymptotic
//! fits, and plot-data grids.
//!
//! The binary wraps [`run`], which parses flags, loads an optional
//! line-oriented `key = value` configuration file, executes one subcommand,
//! and streams either CSV tables or JSON reports. Table-shaped commands
//! (`coeffs`, `triangle`, `eval`, `plotdata`) default to CSV; report-shaped
//! commands (`build`, `verify`, `pair`, `asympt`) default to JSON; `--format`
//! overrides either way except for `build`, whose nested structure has no
//! CSV form.
//!
//! Exit codes: 0 on success, 1 when a verification ran and failed (the
//! report is still printed), 2 on usage or domain errors. Floats are
//! printed with 17 significant digits and a `.` decimal separator, so
//! identical invocations produce byte-identical output.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::coeff::{a_coeff, a_coeff_even, b_coeff, triangle, CoeffFamily, Rational};
use crate::numerics::{
    fmt_f64, pairing, slope_fit, FitDirection, FitKind, PairingReport, PairingSpec,
    QuadratureSpec, SlopeReport, SlopeSpec,
};
use crate::solutions::{build, eval_solution, source_spec, Solution, SolutionFamily, SourceSpec};
use crate::suites::{
    run_suite_configured, SuiteReport, SuiteTunables, NUMERIC_SUITES, SUITE_NAMES, SYMBOLIC_SUITES,
};
use crate::termalg::OperatorKind;
use crate::{domain_err, DomainError};

#[derive(Debug, Parser)]
#[command(
    name = "antilap",
    version,
    about = "Exact and numerical tools for radial anti-Laplacian operators and their source fields"
)]
struct Cli {
    /// Path to a `key = value` configuration file (quad.*, fd.*, pair.*, fit.*).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Output format; tables default to csv, reports to json.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Seed for randomized verification draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

/// Output encoding selected with `--format`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Suite group accepted as the positional argument of `verify`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteGroup {
    /// Exact-arithmetic suites only.
    Symbolic,
    /// Floating-point suites only.
    Numeric,
    /// Every suite.
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print one exact coefficient of the a, b, or even-a triangle.
    Coeffs {
        /// Coefficient family: a, b, or a-even.
        #[arg(long)]
        family: String,
        /// Inner index (odd k for a and b, even l for a-even).
        #[arg(long)]
        k: u32,
        /// Dimension.
        #[arg(long)]
        n: u32,
    },
    /// Print every triangle row with dimension at most the cap.
    Triangle {
        /// Coefficient family: a, b, or a-even.
        #[arg(long)]
        family: String,
        /// Largest dimension to include.
        #[arg(long, value_name = "N")]
        max_n: u32,
    },
    /// Build a solution family member and print its exact structure.
    Build {
        /// Solution family name, e.g. psi, psi-bar, xi, psi-ring, chi.
        #[arg(long)]
        family: String,
        /// Dimension.
        #[arg(long)]
        n: u32,
    },
    /// Evaluate a solution at one field point.
    Eval {
        /// Solution family name.
        #[arg(long)]
        family: String,
        /// Dimension.
        #[arg(long)]
        n: u32,
        /// First radius of the (r, z) frame.
        #[arg(long)]
        r: Option<f64>,
        /// Second radius of the (r, z) frame.
        #[arg(long)]
        z: Option<f64>,
        /// Radial coordinate for x-frame families (phi).
        #[arg(long)]
        x: Option<f64>,
        /// Ring radius, required by ring families.
        #[arg(long)]
        a: Option<f64>,
    },
    /// Run verification suites and report pass/fail per check.
    Verify {
        /// Suite group to run; defaults to all.
        #[arg(value_enum)]
        group: Option<SuiteGroup>,
        /// Run a single suite by name (overrides the group).
        #[arg(long)]
        suite: Option<String>,
        /// Cap the symbolic dimension sweeps (numeric suites keep their ranges).
        #[arg(long, value_name = "N")]
        max_n: Option<u32>,
    },
    /// Pair a point family's source against the standard bump trial.
    Pair {
        /// Point family: xi, psi, psi-bar, or psi-tilde-4.
        #[arg(long)]
        family: String,
        /// Dimension.
        #[arg(long)]
        n: u32,
        /// Trial support radius.
        #[arg(long)]
        rho0: Option<f64>,
        /// Geometric shrink factor of the excision sequence, in (0, 1).
        #[arg(long)]
        eps_ratio: Option<f64>,
        /// Number of excisions.
        #[arg(long)]
        steps: Option<u32>,
    },
    /// Fit an asymptotic law along one direction and report the slope.
    Asympt {
        /// Solution family name.
        #[arg(long)]
        family: String,
        /// Dimension.
        #[arg(long)]
        n: u32,
        /// Direction: r-large, z-large, r-small, or z-axis.
        #[arg(long)]
        direction: String,
        /// Fit model: power (exponent) or log (coefficient of ln(1/t)).
        #[arg(long)]
        fit: Option<String>,
        /// Lower end of the varying coordinate.
        #[arg(long)]
        lo: Option<f64>,
        /// Upper end of the varying coordinate.
        #[arg(long)]
        hi: Option<f64>,
        /// Value of the frozen coordinate.
        #[arg(long)]
        fixed: Option<f64>,
        /// Number of log-spaced samples.
        #[arg(long)]
        samples: Option<usize>,
        /// Ring radius, required by ring families.
        #[arg(long)]
        a: Option<f64>,
    },
    /// Evaluate a family on a rectangular (r, z) grid and emit r,z,value rows.
    Plotdata {
        /// Solution family name (x-frame families are rejected).
        #[arg(long)]
        family: String,
        /// Dimension.
        #[arg(long)]
        n: u32,
        /// Ring radius, required by ring families.
        #[arg(long)]
        a: Option<f64>,
        /// Smallest r value.
        #[arg(long)]
        r_min: f64,
        /// Largest r value (ignored when r-steps is 1).
        #[arg(long)]
        r_max: f64,
        /// Number of r samples.
        #[arg(long)]
        r_steps: u32,
        /// Smallest z value.
        #[arg(long)]
        z_min: f64,
        /// Largest z value (ignored when z-steps is 1).
        #[arg(long)]
        z_max: f64,
        /// Number of z samples.
        #[arg(long)]
        z_steps: u32,
    },
}

/// Parse flags, run one subcommand, and write its output. Returns the
/// process exit code; `args` must include the program name.
pub fn run(args: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    2
                }
            };
        }
    };
    let config = match load_config(cli.config.as_deref()) {
        Ok(config) => config,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            return 2;
        }
    };
    match dispatch(cli, &config, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message);
            2
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<SuiteTunables, DomainError> {
    let Some(path) = path else {
        return Ok(SuiteTunables::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| DomainError::new(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Parse line-oriented `key = value` configuration text. Blank lines and
/// `#` comments are skipped, later assignments win, unknown keys and
/// out-of-range values are rejected.
fn parse_config(text: &str) -> Result<SuiteTunables, DomainError> {
    let mut t = SuiteTunables::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let Some((key, value)) = line.split_once('=') else {
            return domain_err(format!(
                "config line {lineno}: expected `key = value`, got {line:?}"
            ));
        };
        let key = key.trim();
        let value = value.trim();
        match key {
            "quad.abs_tol" => t.quad_abs_tol = Some(positive_f64(key, value)?),
            "quad.rel_tol" => t.quad_rel_tol = Some(positive_f64(key, value)?),
            "quad.max_depth" => {
                let v: u32 = int_value(key, value)?;
                if v < 1 {
                    return domain_err(format!("config key {key} must be at least 1, got {v}"));
                }
                t.quad_max_depth = Some(v);
            }
            "fd.h" => t.fd_h = Some(positive_f64(key, value)?),
            "fd.order" => {
                let v: u8 = int_value(key, value)?;
                if v != 2 && v != 4 {
                    return domain_err(format!("config key {key} must be 2 or 4, got {v}"));
                }
                t.fd_order = Some(v);
            }
            "pair.rho0" => t.pair_rho0 = Some(positive_f64(key, value)?),
            "pair.eps_ratio" => {
                let v = positive_f64(key, value)?;
                if v >= 1.0 {
                    return domain_err(format!(
                        "config key {key} must lie in (0, 1), got {value}"
                    ));
                }
                t.pair_eps_ratio = Some(v);
            }
            "pair.steps" => {
                let v: u32 = int_value(key, value)?;
                if v < 1 {
                    return domain_err(format!("config key {key} must be at least 1, got {v}"));
                }
                t.pair_steps = Some(v);
            }
            "fit.samples" => {
                let v: usize = int_value(key, value)?;
                if v < 3 {
                    return domain_err(format!("config key {key} must be at least 3, got {v}"));
                }
                t.fit_samples = Some(v);
            }
            other => {
                return domain_err(format!(
                    "config line {lineno}: unknown key {other:?}; known keys: quad.abs_tol \
                     quad.rel_tol quad.max_depth fd.h fd.order pair.rho0 pair.eps_ratio \
                     pair.steps fit.samples"
                ));
            }
        }
    }
    Ok(t)
}

fn positive_f64(key: &str, value: &str) -> Result<f64, DomainError> {
    let v: f64 = value
        .parse()
        .map_err(|_| DomainError::new(format!("config key {key}: bad number {value:?}")))?;
    if !v.is_finite() || v <= 0.0 {
        return domain_err(format!("config key {key} must be positive, got {value}"));
    }
    Ok(v)
}

fn int_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, DomainError> {
    value
        .parse()
        .map_err(|_| DomainError::new(format!("config key {key}: bad integer {value:?}")))
}

fn default_format(command: &Command) -> Format {
    match command {
        Command::Coeffs { .. }
        | Command::Triangle { .. }
        | Command::Eval { .. }
        | Command::Plotdata { .. } => Format::Csv,
        Command::Build { .. } | Command::Verify { .. } | Command::Pair { .. }
        | Command::Asympt { .. } => Format::Json,
    }
}

fn wio(e: io::Error) -> DomainError {
    DomainError::new(format!("cannot write output: {e}"))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, DomainError> {
    serde_json::to_string(value)
        .map_err(|e| DomainError::new(format!("cannot serialize report: {e}")))
}

/// JSON payload of `coeffs`.
#[derive(Serialize)]
struct CoeffRecord {
    family: String,
    k: u32,
    n: u32,
    value: String,
}

/// JSON payload of `build`.
#[derive(Serialize)]
struct BuildRecord {
    family: String,
    n: u32,
    operator: OperatorKind,
    solution: Solution,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<SourceSpec>,
}

/// JSON payload of `eval`.
#[derive(Serialize)]
struct EvalRecord {
    family: String,
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<f64>,
    value: f64,
    err: f64,
    evals: u64,
}

/// JSON aggregate of a multi-suite `verify`.
#[derive(Serialize)]
struct VerifyAggregate {
    seed: u64,
    pass: bool,
    suites: Vec<SuiteReport>,
}

/// One grid node of `plotdata`; a singular node serializes with null value.
#[derive(Serialize)]
struct GridPoint {
    r: f64,
    z: f64,
    value: Option<f64>,
}

fn dispatch(
    cli: Cli,
    config: &SuiteTunables,
    out: &mut dyn Write,
    err_stream: &mut dyn Write,
) -> Result<i32, DomainError> {
    let format = cli.format.unwrap_or(default_format(&cli.command));
    let quad = config.quad(QuadratureSpec::default());
    match cli.command {
        Command::Coeffs { family, k, n } => {
            let fam = CoeffFamily::parse(&family)?;
            let value = coeff_value(fam, k, n)?;
            match format {
                Format::Csv => emit_coeff_csv(out, fam, k, n, &value).map_err(wio)?,
                Format::Json => {
                    let record = CoeffRecord {
                        family: fam.to_string(),
                        k,
                        n,
                        value: value.to_string(),
                    };
                    writeln!(out, "{}", to_json(&record)?).map_err(wio)?;
                }
            }
            Ok(0)
        }
        Command::Triangle { family, max_n } => {
            let fam = CoeffFamily::parse(&family)?;
            let rows = triangle(fam, max_n)?;
            match format {
                Format::Csv => {
                    let start = match fam {
                        CoeffFamily::AOdd | CoeffFamily::BOdd => 3,
                        CoeffFamily::AEven => 4,
                    };
                    emit_triangle_csv(out, &rows, start).map_err(wio)?;
                }
                Format::Json => writeln!(out, "{}", to_json(&rows)?).map_err(wio)?,
            }
            Ok(0)
        }
        Command::Build { family, n } => {
            if format == Format::Csv {
                return domain_err(
                    "build output is a nested structure with no CSV form; use --format json",
                );
            }
            let fam = SolutionFamily::parse(&family)?;
            let record = BuildRecord {
                family: fam.to_string(),
                n,
                operator: fam.operator(),
                solution: build(fam, n)?,
                source: source_spec(fam, n).ok(),
            };
            writeln!(out, "{}", to_json(&record)?).map_err(wio)?;
            Ok(0)
        }
        Command::Eval {
            family,
            n,
            r,
            z,
            x,
            a,
        } => {
            let fam = SolutionFamily::parse(&family)?;
            let sol = build(fam, n)?;
            let record = eval_record(fam, &sol, n, r, z, x, a, &quad)?;
            match format {
                Format::Csv => emit_eval_csv(out, &record).map_err(wio)?,
                Format::Json => writeln!(out, "{}", to_json(&record)?).map_err(wio)?,
            }
            Ok(0)
        }
        Command::Verify {
            group,
            suite,
            max_n,
        } => {
            let reports = if let Some(name) = suite {
                vec![run_suite_configured(&name, cli.seed, max_n, config)?]
            } else {
                let names: &[&str] = match group.unwrap_or(SuiteGroup::All) {
                    SuiteGroup::Symbolic => &SYMBOLIC_SUITES,
                    SuiteGroup::Numeric => &NUMERIC_SUITES,
                    SuiteGroup::All => &SUITE_NAMES,
                };
                names
                    .iter()
                    .map(|name| run_suite_configured(name, cli.seed, max_n, config))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let pass = reports.iter().all(|r| r.pass);
            match format {
                Format::Json => {
                    if reports.len() == 1 {
                        writeln!(out, "{}", to_json(&reports[0])?).map_err(wio)?;
                    } else {
                        let aggregate = VerifyAggregate {
                            seed: cli.seed,
                            pass,
                            suites: reports,
                        };
                        writeln!(out, "{}", to_json(&aggregate)?).map_err(wio)?;
                    }
                }
                Format::Csv => emit_suites_csv(out, &reports).map_err(wio)?,
            }
            Ok(if pass { 0 } else { 1 })
        }
        Command::Pair {
            family,
            n,
            rho0,
            eps_ratio,
            steps,
        } => {
            let fam = SolutionFamily::parse(&family)?;
            let mut spec = config.pairing_spec(PairingSpec::default());
            if let Some(v) = rho0 {
                spec.rho0 = v;
            }
            if let Some(v) = eps_ratio {
                spec.eps_ratio = v;
            }
            if let Some(v) = steps {
                spec.steps = v;
            }
            let report = pairing(fam, n, &spec, &quad)?;
            match format {
                Format::Json => writeln!(out, "{}", to_json(&report)?).map_err(wio)?,
                Format::Csv => emit_pair_csv(out, &report).map_err(wio)?,
            }
            Ok(if report.pass == Some(false) { 1 } else { 0 })
        }
        Command::Asympt {
            family,
            n,
            direction,
            fit,
            lo,
            hi,
            fixed,
            samples,
            a,
        } => {
            let fam = SolutionFamily::parse(&family)?;
            let dir = FitDirection::parse(&direction)?;
            let kind = match fit.as_deref() {
                Some(s) => FitKind::parse(s)?,
                None => FitKind::PowerLaw,
            };
            let mut spec = config.slope(SlopeSpec::for_direction(dir));
            if let Some(v) = samples {
                spec.samples = v;
            }
            if let Some(v) = lo {
                spec.lo = v;
            }
            if let Some(v) = hi {
                spec.hi = v;
            }
            if let Some(v) = fixed {
                spec.fixed = v;
            }
            let report = slope_fit(fam, n, a, dir, kind, &spec, &quad)?;
            match format {
                Format::Json => writeln!(out, "{}", to_json(&report)?).map_err(wio)?,
                Format::Csv => emit_asympt_csv(out, &report).map_err(wio)?,
            }
            Ok(0)
        }
        Command::Plotdata {
            family,
            n,
            a,
            r_min,
            r_max,
            r_steps,
            z_min,
            z_max,
            z_steps,
        } => {
            let fam = SolutionFamily::parse(&family)?;
            let sol = build(fam, n)?;
            if matches!(sol, Solution::PointX { .. }) {
                return domain_err(format!(
                    "{fam} lives in the x frame; plotdata samples the (r, z) half-plane"
                ));
            }
            check_ring_radius(fam, a)?;
            if r_steps == 0 || z_steps == 0 {
                return domain_err("grid steps must be at least 1");
            }
            if !r_min.is_finite() || r_min < 0.0 {
                return domain_err(format!("r-min must be nonnegative, got {r_min}"));
            }
            if r_steps > 1 && !(r_max > r_min) {
                return domain_err(format!(
                    "r-max must exceed r-min for more than one step, got [{r_min}, {r_max}]"
                ));
            }
            if z_steps > 1 && !(z_max > z_min) {
                return domain_err(format!(
                    "z-max must exceed z-min for more than one step, got [{z_min}, {z_max}]"
                ));
            }
            let mut points = Vec::with_capacity(r_steps as usize * z_steps as usize);
            let mut singular = 0usize;
            for r in grid_axis(r_min, r_max, r_steps) {
                for z in grid_axis(z_min, z_max, z_steps) {
                    let value = match eval_solution(&sol, r, z, a, &quad) {
                        Ok(ev) if ev.value.is_finite() => Some(ev.value),
                        _ => None,
                    };
                    if value.is_none() {
                        singular += 1;
                    }
                    points.push(GridPoint { r, z, value });
                }
            }
            if singular == points.len() {
                return domain_err("every grid point is singular for this family");
            }
            match format {
                Format::Csv => emit_grid_csv(out, &points).map_err(wio)?,
                Format::Json => writeln!(out, "{}", to_json(&points)?).map_err(wio)?,
            }
            if singular > 0 {
                writeln!(
                    err_stream,
                    "warning: {singular} of {} grid points are singular and were left empty",
                    points.len()
                )
                .map_err(wio)?;
            }
            Ok(0)
        }
    }
}

fn coeff_value(fam: CoeffFamily, k: u32, n: u32) -> Result<Rational, DomainError> {
    match fam {
        CoeffFamily::AOdd => a_coeff(k, n),
        CoeffFamily::BOdd => b_coeff(k, n),
        CoeffFamily::AEven => a_coeff_even(k, n),
    }
}

fn check_ring_radius(fam: SolutionFamily, a: Option<f64>) -> Result<(), DomainError> {
    if fam.is_ring() {
        let Some(a) = a else {
            return domain_err(format!("ring family {fam} needs a ring radius --a"));
        };
        if !a.is_finite() || a <= 0.0 {
            return domain_err(format!("ring radius must be positive, got a = {a}"));
        }
    } else if a.is_some() {
        return domain_err(format!("--a only applies to ring families, not {fam}"));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn eval_record(
    fam: SolutionFamily,
    sol: &Solution,
    n: u32,
    r: Option<f64>,
    z: Option<f64>,
    x: Option<f64>,
    a: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<EvalRecord, DomainError> {
    if let Solution::PointX { .. } = sol {
        let Some(x) = x else {
            return domain_err(format!("{fam} lives in the x frame; pass --x"));
        };
        if r.is_some() || z.is_some() || a.is_some() {
            return domain_err(format!("{fam} takes --x only, not --r, --z, or --a"));
        }
        let ev = eval_solution(sol, x, 0.0, None, quad).map_err(|e| DomainError::new(e.to_string()))?;
        return Ok(EvalRecord {
            family: fam.to_string(),
            n,
            x: Some(x),
            r: None,
            z: None,
            a: None,
            value: ev.value,
            err: ev.err_estimate,
            evals: ev.evals,
        });
    }
    if x.is_some() {
        return domain_err(format!("{fam} lives in the (r, z) frame; pass --r and --z"));
    }
    let (Some(r), Some(z)) = (r, z) else {
        return domain_err(format!("{fam} needs both --r and --z"));
    };
    check_ring_radius(fam, a)?;
    let ev = eval_solution(sol, r, z, a, quad).map_err(|e| DomainError::new(e.to_string()))?;
    Ok(EvalRecord {
        family: fam.to_string(),
        n,
        x: None,
        r: Some(r),
        z: Some(z),
        a,
        value: ev.value,
        err: ev.err_estimate,
        evals: ev.evals,
    })
}

/// Uniform samples from `min` to `max` inclusive; a single step collapses
/// to `min`.
fn grid_axis(min: f64, max: f64, steps: u32) -> Vec<f64> {
    if steps == 1 {
        return vec![min];
    }
    let d = (max - min) / (steps - 1) as f64;
    (0..steps).map(|i| min + d * i as f64).collect()
}

fn emit_coeff_csv(
    out: &mut dyn Write,
    fam: CoeffFamily,
    k: u32,
    n: u32,
    value: &Rational,
) -> io::Result<()> {
    writeln!(out, "family,k,n,value")?;
    writeln!(out, "{fam},{k},{n},{value}")
}

fn emit_triangle_csv(
    out: &mut dyn Write,
    rows: &[crate::coeff::TriangleRow],
    start: u32,
) -> io::Result<()> {
    writeln!(out, "n,k,value")?;
    for row in rows {
        for (i, value) in row.values.iter().enumerate() {
            writeln!(out, "{},{},{}", row.n, start + 2 * i as u32, value)?;
        }
    }
    Ok(())
}

fn emit_eval_csv(out: &mut dyn Write, record: &EvalRecord) -> io::Result<()> {
    if let Some(x) = record.x {
        writeln!(out, "x,value,err")?;
        writeln!(
            out,
            "{},{},{}",
            fmt_f64(x),
            fmt_f64(record.value),
            fmt_f64(record.err)
        )
    } else {
        writeln!(out, "r,z,value,err")?;
        writeln!(
            out,
            "{},{},{},{}",
            fmt_f64(record.r.unwrap_or(f64::NAN)),
            fmt_f64(record.z.unwrap_or(f64::NAN)),
            fmt_f64(record.value),
            fmt_f64(record.err)
        )
    }
}

fn emit_suites_csv(out: &mut dyn Write, reports: &[SuiteReport]) -> io::Result<()> {
    writeln!(out, "suite,check,pass,detail")?;
    for report in reports {
        for check in &report.checks {
            writeln!(
                out,
                "{},{},{},{}",
                report.suite, check.name, check.pass, check.detail
            )?;
        }
    }
    Ok(())
}

fn emit_pair_csv(out: &mut dyn Write, report: &PairingReport) -> io::Result<()> {
    writeln!(out, "step,eps,eta,j_r,j_z,total")?;
    for (i, step) in report.sequence.iter().enumerate() {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            i,
            fmt_f64(step.eps),
            fmt_f64(step.eta),
            fmt_f64(step.j_r),
            fmt_f64(step.j_z),
            fmt_f64(step.total)
        )?;
    }
    writeln!(out, "extrapolated,,,,,{}", fmt_f64(report.extrapolated))
}

fn emit_asympt_csv(out: &mut dyn Write, report: &SlopeReport) -> io::Result<()> {
    writeln!(
        out,
        "family,n,a,direction,kind,fixed,lo,hi,samples,slope,intercept,r_squared"
    )?;
    let a = report.a.map(fmt_f64).unwrap_or_default();
    writeln!(
        out,
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        report.family,
        report.n,
        a,
        report.direction,
        report.kind,
        fmt_f64(report.fixed),
        fmt_f64(report.lo),
        fmt_f64(report.hi),
        report.samples,
        fmt_f64(report.slope),
        fmt_f64(report.intercept),
        fmt_f64(report.r_squared)
    )
}

fn emit_grid_csv(out: &mut dyn Write, points: &[GridPoint]) -> io::Result<()> {
    writeln!(out, "r,z,value")?;
    for p in points {
        match p.value {
            Some(v) => writeln!(out, "{},{},{}", fmt_f64(p.r), fmt_f64(p.z), fmt_f64(v))?,
            None => writeln!(out, "{},{},", fmt_f64(p.r), fmt_f64(p.z))?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("antilap")
            .chain(args.iter().copied())
            .map(String::from)
            .collect();
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(&argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn coeffs_prints_one_exact_csv_row() {
        let (code, out, _) = run_cli(&["coeffs", "--family", "a", "--k", "7", "--n", "11"]);
        assert_eq!(code, 0);
        assert_eq!(out, "family,k,n,value\na,7,11,18/35\n");
        let (code, out, _) = run_cli(&["coeffs", "--family", "b", "--k", "7", "--n", "15"]);
        assert_eq!(code, 0);
        assert!(out.ends_with("b,7,15,105/1024\n"));
    }

    #[test]
    fn eval_reports_x_frame_closed_form() {
        let (code, out, _) = run_cli(&["eval", "--family", "phi", "--n", "5", "--x", "2"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("x,value,err"));
        let row = lines.next().unwrap();
        assert!(row.starts_with(&fmt_f64(2.0)));
        assert!(row.contains(&fmt_f64(1.0 / 24.0)));
    }

    #[test]
    fn config_covers_every_key_with_last_assignment_winning() {
        let text = "\n# comment\nquad.abs_tol = 1e-9\nquad.rel_tol = 1e-8\n\
                    quad.max_depth = 30\nfd.h = 0.02\nfd.order = 4\npair.rho0 = 0.25\n\
                    pair.eps_ratio = 0.4\npair.steps = 6\nfit.samples = 16\nfd.h = 0.04\n";
        let t = parse_config(text).unwrap();
        assert_eq!(t.quad_abs_tol, Some(1e-9));
        assert_eq!(t.quad_rel_tol, Some(1e-8));
        assert_eq!(t.quad_max_depth, Some(30));
        assert_eq!(t.fd_h, Some(0.04));
        assert_eq!(t.fd_order, Some(4));
        assert_eq!(t.pair_rho0, Some(0.25));
        assert_eq!(t.pair_eps_ratio, Some(0.4));
        assert_eq!(t.pair_steps, Some(6));
        assert_eq!(t.fit_samples, Some(16));
    }

    #[test]
    fn config_rejects_unknown_keys_and_bad_values() {
        assert!(parse_config("quad.tol = 1e-9").is_err());
        assert!(parse_config("fd.order = 3").is_err());
        assert!(parse_config("pair.eps_ratio = 1.5").is_err());
        assert!(parse_config("quad.abs_tol = -1").is_err());
        assert!(parse_config("fit.samples = two").is_err());
        assert!(parse_config("just a line").is_err());
    }

    #[test]
    fn grid_axis_hits_both_endpoints() {
        let axis = grid_axis(1.0, 2.0, 5);
        assert_eq!(axis.len(), 5);
        assert_eq!(axis[0], 1.0);
        assert_eq!(axis[4], 2.0);
        assert_eq!(grid_axis(0.3, 9.0, 1), vec![0.3]);
    }

    #[test]
    fn usage_and_domain_errors_exit_two() {
        let (code, _, err) = run_cli(&["coeffs", "--family", "q", "--k", "3", "--n", "3"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown coefficient family"));
        let (code, _, _) = run_cli(&["nonsense"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_cli(&["build", "--family", "psi", "--n", "5", "--format", "csv"]);
        assert_eq!(code, 2);
        assert!(err.contains("no CSV form"));
        let (code, _, err) = run_cli(&["eval", "--family", "xi", "--n", "3", "--r", "0", "--z", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("singular"));
    }

    #[test]
    fn verify_single_suite_reports_pass() {
        let (code, out, _) = run_cli(&["verify", "--suite", "triangles"]);
        assert_eq!(code, 0);
        assert!(out.contains("\"suite\":\"triangles\""));
        assert!(out.contains("\"pass\":true"));
        let (code, out, _) = run_cli(&["verify", "--suite", "triangles", "--format", "csv"]);
        assert_eq!(code, 0);
        assert!(out.starts_with("suite,check,pass,detail\n"));
        assert!(out.contains("triangles,a-triangle row n = 3,true,"));
    }
}
