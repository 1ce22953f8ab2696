use clap::{Args, Parser, Subcommand};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use surfacelengths::coords::{DTVector, FNVector};
use surfacelengths::holonomy::{build_representation, LibCurve, Provenance};
use surfacelengths::hyp2::{prop51_bounds, solve_hexagon};
use surfacelengths::surface::{standard_marking, Marking, SurfaceKind};
use surfacelengths::sweep::{self, RunConfig, SweepKind};

/// Exit codes: 0 every check passed, 1 a verification failed, 2 bad input.
const FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "surflen", version, about = "Lengths of curves on hyperbolic surfaces")]
struct Cli {
    /// Print only errors and the result rows.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the right-angled hexagon with alternate sides a, b, x.
    SolveHexagon {
        #[arg(allow_hyphen_values = true)]
        a: f64,
        #[arg(allow_hyphen_values = true)]
        b: f64,
        #[arg(allow_hyphen_values = true)]
        x: f64,
    },
    /// Length of a curve system: exact when a word is known, plus an upper bound.
    Length {
        /// Marking or surface kind (`{"genus": g, "boundary": r}`), as a file or inline JSON.
        surface: String,
        /// Fenchel-Nielsen vector, as a file or inline JSON.
        metric: String,
        /// Dehn-Thurston vector, as a file or inline JSON.
        curve: String,
    },
    /// Run a seeded verification sweep and write one CSV row per sample.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Run configuration, as a file or inline JSON. Flags override its fields.
    config: Option<String>,
    #[arg(long)]
    which: SweepKind,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Surface kind as `g,r`.
    #[arg(long, value_parser = parse_kind)]
    kind: Option<SurfaceKind>,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<SurfaceKind, String> {
    let (g, r) = s.split_once(',').ok_or("expected g,r")?;
    let g = g.trim().parse().map_err(|e| format!("genus: {e}"))?;
    let r = r.trim().parse().map_err(|e| format!("boundary: {e}"))?;
    SurfaceKind::new(g, r).map_err(|e| e.to_string())
}

/// Error carrying the exit code it should produce.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(USAGE, e.to_string())
    }
}

/// Inline JSON if the argument looks like it, a file path otherwise.
fn read_doc<T: serde::de::DeserializeOwned>(arg: &str, what: &str) -> Result<T, Failure> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| Failure(USAGE, format!("cannot read {what} {arg}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure(USAGE, format!("bad {what} document: {e}")))
}

fn read_marking(arg: &str) -> Result<Marking, Failure> {
    let value: serde_json::Value = read_doc(arg, "surface")?;
    if value.get("pieces").is_some() {
        return Ok(serde_json::from_value(value)?);
    }
    let kind: SurfaceKind = serde_json::from_value(value)?;
    Ok(standard_marking(SurfaceKind::new(kind.genus, kind.boundary)?)?)
}

fn solve(a: f64, b: f64, x: f64, out: &mut impl Write) -> Result<(), Failure> {
    let h = solve_hexagon(a, b, x)?;
    let bounds = prop51_bounds(a, b, x)?;
    let names = ["a", "z", "x", "y", "b", "w"];
    for (name, side) in names.iter().zip(h.sides()) {
        writeln!(out, "{name} = {side:.12}")?;
    }
    let ortho = h.orthogeodesic(0);
    writeln!(out, "h = {ortho:.12}")?;
    writeln!(out, "closure error = {:.3e}", h.closure_error())?;
    let checks = [
        ("w <= 1/a + 1/b + x + 2 log 2", h.w(), bounds.w_bound),
        ("h <= 1/a + 1/b + b + x + log 2", ortho, bounds.h_bound1),
        ("h <= 1/a + (1/b + 1/x)/2 + b + x + 2 log 2", ortho, bounds.h_bound2),
    ];
    let mut ok = true;
    for (label, lhs, rhs) in checks {
        let pass = lhs <= rhs;
        ok &= pass;
        writeln!(out, "{} {label}: {lhs:.12} vs {rhs:.12}", if pass { "PASS" } else { "FAIL" })?;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure(FAILED, "a hexagon bound failed".into()))
    }
}

fn length(surface: &str, metric: &str, curve: &str, out: &mut impl Write) -> Result<(), Failure> {
    let marking = read_marking(surface)?;
    let fnv: FNVector = read_doc(metric, "metric")?;
    let dt: DTVector = read_doc(curve, "curve")?;
    let rep = build_representation(&marking, &fnv)?;
    let c = LibCurve::resolve(&rep, dt, Provenance::base("input"))?;
    let res = surfacelengths::lengths::length(&rep, &c)?;
    match res.exact {
        Some(v) => writeln!(out, "exact: {v:.12}")?,
        None => writeln!(out, "exact: unavailable")?,
    }
    writeln!(out, "upper bound: {:.12}", res.upper_bound)?;
    for n in &res.notes {
        writeln!(out, "note: {n}")?;
    }
    if res.is_consistent() {
        Ok(())
    } else {
        Err(Failure(FAILED, "exact length exceeds the upper bound".into()))
    }
}

fn run_sweep(args: &SweepArgs, quiet: bool) -> Result<(), Failure> {
    let mut config = match &args.config {
        Some(doc) => read_doc::<RunConfig>(doc, "run config")?,
        None => RunConfig::new(0, 1000, SurfaceKind::new(1, 1)?),
    };
    config.seed = args.seed.unwrap_or(config.seed);
    config.samples = args.samples.unwrap_or(config.samples);
    config.kind = args.kind.unwrap_or(config.kind);
    if args.out.is_some() {
        config.out.clone_from(&args.out);
    }
    config.validate()?;

    let rows = sweep::run(&config, args.which)?;
    let summary = sweep::summarize(args.which, &rows);
    match &config.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure(USAGE, format!("cannot write {}: {e}", path.display())))?;
            sweep::write_csv(args.which, &rows, BufWriter::new(file))?;
            if !quiet {
                println!("{summary}");
            }
        }
        None => {
            sweep::write_csv(args.which, &rows, io::stdout().lock())?;
            if !quiet {
                eprintln!("{summary}");
            }
        }
    }
    if summary.passed() {
        Ok(())
    } else {
        Err(Failure(FAILED, format!("{} of {} samples failed", summary.failures, summary.samples)))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    let result = match &cli.command {
        Command::SolveHexagon { a, b, x } => solve(*a, *b, *x, &mut stdout),
        Command::Length { surface, metric, curve } => length(surface, metric, curve, &mut stdout),
        Command::Sweep(args) => {
            drop(stdout);
            run_sweep(args, cli.quiet)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
