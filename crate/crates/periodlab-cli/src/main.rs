//! Command line front end: classify a system, export a period curve, or
//! browse the example catalog.
//!
//! Exit codes: 0 on success, 2 when the origin is not a center, 1 for
//! invalid systems and numerical failures, 64 for usage errors.

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use periodlab::{
    classify, period_curve_conservative, period_curve_lienard, render_builtin_json,
    render_builtin_list_json, render_builtin_list_text, render_curve_csv,
    render_report_json, render_report_text, well_range, Conclusion, CurveConfig, Error,
    GridConfig, SystemSpec, WellRange,
};
use std::path::PathBuf;

const EXIT_OK: i32 = 0;
const EXIT_FAILURE: i32 = 1;
const EXIT_NOT_A_CENTER: i32 = 2;
const EXIT_USAGE: i32 = 64;

#[derive(Parser)]
#[command(
    name = "periodlab",
    version,
    about = "Period functions of planar centers: classification, curves, examples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the period function of x'' + f(x) x' + g(x) = 0.
    Report(ReportArgs),
    /// Sample the period curve and write it as CSV.
    Curve(CurveArgs),
    /// Browse the example catalog, or classify one entry.
    Builtin(BuiltinArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct ReportArgs {
    /// Restoring force g(x); must vanish at 0 with g'(0) > 0.
    #[arg(long)]
    g: String,
    /// Damping coefficient f(x); must vanish at 0.
    #[arg(long, default_value = "0")]
    f: String,
    /// Outward scan cap when locating the potential well.
    #[arg(long, default_value_t = 0.4)]
    cmax: f64,
    /// Number of samples on the verification curve.
    #[arg(long, default_value_t = 6)]
    samples: usize,
    /// Numerical tolerance; defaults to 1e-10 or $PERIODLAB_TOL.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct CurveArgs {
    /// Restoring force g(x).
    #[arg(long)]
    g: String,
    /// Damping coefficient f(x).
    #[arg(long, default_value = "0")]
    f: String,
    /// Sweep start: an energy level when f = 0, an amplitude otherwise.
    #[arg(long)]
    clo: f64,
    /// Sweep end; must exceed the start.
    #[arg(long)]
    chi: f64,
    /// Number of evenly spaced samples.
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Numerical tolerance; defaults to 1e-10 or $PERIODLAB_TOL.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct BuiltinArgs {
    /// Catalog key; omit to list every entry.
    key: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match cli.command {
        Command::Report(args) => run_report(args),
        Command::Curve(args) => run_curve(args),
        Command::Builtin(args) => run_builtin(args),
    };
    std::process::exit(code);
}

/// Flag value, then the environment override, then the library default.
fn resolve_tol(flag: Option<f64>) -> Result<f64, String> {
    if let Some(t) = flag {
        if t.is_finite() && t > 0.0 {
            return Ok(t);
        }
        return Err(format!("--tol must be a positive finite number, got {t}"));
    }
    match std::env::var("PERIODLAB_TOL") {
        Err(_) => Ok(1e-10),
        Ok(raw) => raw
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t > 0.0)
            .ok_or_else(|| format!("PERIODLAB_TOL must be a positive finite number, got {raw:?}")),
    }
}

fn failure_code(err: &Error) -> i32 {
    match err {
        Error::NotACenter { .. } => EXIT_NOT_A_CENTER,
        _ => EXIT_FAILURE,
    }
}

fn run_report(args: ReportArgs) -> i32 {
    let tol = match resolve_tol(args.tol) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let system = match SystemSpec::from_strings(&args.f, &args.g) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let grid = GridConfig { x_cap: args.cmax, ..GridConfig::default() };
    let curve = CurveConfig { samples: args.samples, tol };
    match classify(&system, &grid, &curve) {
        Ok(report) => {
            let doc = match args.format {
                Format::Json => render_report_json(&system, &report),
                Format::Text => render_report_text(&system, &report),
            };
            print!("{doc}");
            if report.conclusion == Conclusion::NotACenter {
                EXIT_NOT_A_CENTER
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            failure_code(&e)
        }
    }
}

/// Widen the scan cap until the well either reaches the requested energy
/// or is bounded by zeros of g on both sides, in which case no cap helps.
fn well_for_energy(system: &SystemSpec, chi: f64) -> periodlab::Result<WellRange> {
    let mut cap = 1.0;
    loop {
        let range = well_range(system.g(), cap)?;
        let bounded = range.b_max < cap && -range.a_min < cap;
        if range.c_max >= chi || bounded || cap >= 64.0 {
            return Ok(range);
        }
        cap *= 2.0;
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

fn run_curve(args: CurveArgs) -> i32 {
    let tol = match resolve_tol(args.tol) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    if !(args.clo > 0.0) || !(args.chi > args.clo) {
        eprintln!(
            "error: the sweep needs 0 < clo < chi, got clo = {} and chi = {}",
            args.clo, args.chi
        );
        return EXIT_USAGE;
    }
    if args.n < 2 {
        eprintln!("error: the sweep needs at least 2 samples, got {}", args.n);
        return EXIT_USAGE;
    }
    let system = match SystemSpec::from_strings(&args.f, &args.g) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let params = linspace(args.clo, args.chi, args.n);
    let curve = if system.is_conservative() {
        well_for_energy(&system, args.chi).and_then(|range| {
            period_curve_conservative(system.g(), &range, &params, tol)
        })
    } else {
        period_curve_lienard(&system, &params, tol)
    };
    let curve = match curve {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return failure_code(&e);
        }
    };
    let csv = render_curve_csv(&curve);
    match args.out {
        None => {
            print!("{csv}");
            EXIT_OK
        }
        Some(path) => match std::fs::write(&path, csv) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_FAILURE
            }
        },
    }
}

fn run_builtin(args: BuiltinArgs) -> i32 {
    let key = match args.key {
        None => {
            let doc = match args.format {
                Format::Json => render_builtin_list_json(periodlab::builtin::BUILTINS),
                Format::Text => render_builtin_list_text(periodlab::builtin::BUILTINS),
            };
            print!("{doc}");
            return EXIT_OK;
        }
        Some(k) => k,
    };
    let entry = match periodlab::builtin::find(&key) {
        Some(e) => e,
        None => {
            eprintln!(
                "error: no catalog entry named {key:?}; run `periodlab builtin` for the list"
            );
            return EXIT_FAILURE;
        }
    };
    let tol = match resolve_tol(None) {
        Ok(t) => t,
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
    };
    let system = match entry.system() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_FAILURE;
        }
    };
    let curve_cfg = CurveConfig { tol, ..CurveConfig::default() };
    match classify(&system, &GridConfig::default(), &curve_cfg) {
        Ok(report) => {
            match args.format {
                Format::Json => print!("{}", render_builtin_json(entry, &system, &report)),
                Format::Text => {
                    println!("key: {} ({})", entry.key, entry.title);
                    println!("provenance: {}", entry.provenance);
                    print!("{}", render_report_text(&system, &report));
                }
            }
            if report.conclusion == Conclusion::NotACenter {
                EXIT_NOT_A_CENTER
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            failure_code(&e)
        }
    }
}
