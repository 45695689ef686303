use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser};
use flexkin::io::write_outcome;
use flexkin::{run_case, Error, Settings};

const USAGE_ERROR: u8 = 2;
const DIVERGENCE: u8 = 3;
const IO_ERROR: u8 = 4;

/// Runs one benchmark case, or a grid-convergence study, with a kinetic finite-volume scheme.
#[derive(Parser, Debug)]
#[command(name = "flexkin", version, arg_required_else_help = true)]
struct Cli {
    /// key = value file; flags override its entries
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// sine, tc1 .. tc15 (tc2a/b, tc6a/b, tc8a/b)
    #[arg(long)]
    case: Option<String>,
    /// kfds, kfds+, klw, tvd, tvd+
    #[arg(long)]
    scheme: Option<String>,
    /// N for line cases, N or NxM for planar ones
    #[arg(long, value_name = "N|NxM")]
    cells: Option<String>,
    #[arg(long)]
    cfl: Option<String>,
    /// final time; the case default otherwise
    #[arg(long, value_name = "T")]
    tfinal: Option<String>,
    /// wave-speed rule: ce, rh, hybrid
    #[arg(long)]
    lambda: Option<String>,
    /// run a convergence study instead of a single grid
    #[arg(long)]
    eoc: bool,
    /// comma-separated doubling grids for --eoc
    #[arg(long, value_name = "LIST")]
    grids: Option<String>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// csv, json, or bin (2D fields)
    #[arg(long)]
    format: Option<String>,
    /// field, norms, eoc-table
    #[arg(long)]
    what: Option<String>,
    #[arg(long, value_name = "N")]
    max_steps: Option<String>,
    /// steady residual threshold max|du|/dt
    #[arg(long, value_name = "TOL")]
    steady_tol: Option<String>,
    /// dam depths for tc15
    #[arg(long, value_name = "H")]
    inner_depth: Option<String>,
    #[arg(long, value_name = "H")]
    outer_depth: Option<String>,
}

fn settings(cli: &Cli) -> flexkin::Result<Settings> {
    let mut s = match &cli.config {
        Some(p) => Settings::load(p)?,
        None => Settings::default(),
    };
    let pairs = [
        ("case", &cli.case),
        ("scheme", &cli.scheme),
        ("cells", &cli.cells),
        ("cfl", &cli.cfl),
        ("tfinal", &cli.tfinal),
        ("lambda", &cli.lambda),
        ("grids", &cli.grids),
        ("format", &cli.format),
        ("what", &cli.what),
        ("max_steps", &cli.max_steps),
        ("steady_tol", &cli.steady_tol),
        ("inner_depth", &cli.inner_depth),
        ("outer_depth", &cli.outer_depth),
    ];
    for (k, v) in pairs {
        if let Some(v) = v {
            s.set(k, v)?;
        }
    }
    if cli.eoc {
        s.eoc = true;
    }
    if let Some(p) = &cli.out {
        s.out = Some(p.clone());
    }
    Ok(s)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Harness(_) => USAGE_ERROR,
        Error::Io(_) | Error::Csv(_) | Error::Json(_) => IO_ERROR,
        _ => DIVERGENCE,
    }
}

fn run(cli: &Cli) -> flexkin::Result<()> {
    let (cfg, spec) = settings(cli)?.finish()?;
    let outcome = run_case(&cfg)?;
    println!("{}", outcome.summary);
    for p in write_outcome(&outcome, &cfg, &spec)? {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            if code == USAGE_ERROR {
                eprintln!("{}", Cli::command().render_usage());
            }
            ExitCode::from(code)
        }
    }
}
