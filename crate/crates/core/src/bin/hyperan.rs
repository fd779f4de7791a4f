use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hyperan::algebra::Algebra;
use hyperan::classify::{AxisRange, ToleranceRule};
use hyperan::operators::OperatorKind;
use hyperan::report::{self, Command, Format, JobConfig};
use hyperan::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "hyperan",
    version,
    about = "Classify hypercomplex functions by analyticity condition"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Residual statistics and a verdict for every operator
    Classify(Args),
    /// Per-point residuals of one operator
    ResidualMap(Args),
    /// Observed finite-difference orders on the grid
    Convergence(Args),
    /// Dump the basis multiplication table
    Table(Args),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AlgebraArg {
    Quaternion,
    Octonion,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Function spec JSON file
    #[arg(long, conflicts_with = "spec_json")]
    spec: Option<PathBuf>,
    /// Inline function spec JSON
    #[arg(long)]
    spec_json: Option<String>,
    #[arg(long, value_enum)]
    algebra: Option<AlgebraArg>,
    /// Finite-difference step (for `convergence`: the base step h₀)
    #[arg(long)]
    h: Option<f64>,
    /// Absolute residual tolerance for every operator
    #[arg(long)]
    tol: Option<f64>,
    /// `lo,hi,n`, given once for all axes or once per axis
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    grid: Vec<AxisRange>,
    #[arg(long)]
    exclude_axis_radius: Option<f64>,
    /// Seed for grid jitter
    #[arg(long)]
    seed: Option<u64>,
    /// Grid jitter as a fraction of the lattice spacing
    #[arg(long)]
    jitter: Option<f64>,
    /// Operator for `residual-map` (default local_conj_radial) or
    /// `convergence` (default: all)
    #[arg(long)]
    op: Option<String>,
    /// Give the third-order probe a verdict
    #[arg(long)]
    judge_probe: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_axis(s: &str) -> std::result::Result<AxisRange, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("expected lo,hi,n but got `{s}`"));
    };
    Ok(AxisRange {
        lo: lo.parse().map_err(|e| format!("lo: {e}"))?,
        hi: hi.parse().map_err(|e| format!("hi: {e}"))?,
        count: n.parse().map_err(|e| format!("n: {e}"))?,
    })
}

fn build_job(command: Command, args: &Args) -> Result<JobConfig> {
    let spec_text = match (&args.spec, &args.spec_json) {
        (Some(path), _) => Some(
            std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?,
        ),
        (None, text) => text.clone(),
    };
    let spec = spec_text
        .as_deref()
        .map(report::parse_function_spec)
        .transpose()?;
    let requested = args.algebra.map(|a| match a {
        AlgebraArg::Quaternion => Algebra::Quaternion,
        AlgebraArg::Octonion => Algebra::Octonion,
    });
    let algebra = match (requested, &spec) {
        (Some(a), Some(s)) if a != s.algebra() => {
            return Err(Error::DimensionMismatch {
                expected: a.dim(),
                found: s.algebra().dim(),
            })
        }
        (Some(a), _) => a,
        (None, Some(s)) => s.algebra(),
        (None, None) => Algebra::Quaternion,
    };
    let mut job = report::default_job(command, algebra, spec);
    let cfg = &mut job.classify;
    if let Some(h) = args.h {
        if command == Command::Convergence {
            cfg.order_h = h;
        } else {
            cfg.h = h;
        }
    }
    if let Some(tol) = args.tol {
        cfg.tolerance = ToleranceRule::Absolute { value: tol };
    }
    match args.grid.len() {
        0 => {}
        1 => cfg.grid.axes = vec![args.grid[0]; algebra.dim()],
        n if n == algebra.dim() => cfg.grid.axes = args.grid.clone(),
        n => {
            return Err(Error::Config(format!(
                "--grid given {n} times; expected once or {} times",
                algebra.dim()
            )))
        }
    }
    if let Some(r) = args.exclude_axis_radius {
        cfg.grid.axis_exclusion_radius = r;
    }
    if let Some(seed) = args.seed {
        cfg.grid.seed = seed;
    }
    if let Some(j) = args.jitter {
        cfg.grid.jitter = j;
    }
    cfg.judge_probe = args.judge_probe;
    job.operator = args
        .op
        .as_deref()
        .map(str::parse::<OperatorKind>)
        .transpose()?;
    job.format = match args.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    Ok(job)
}

fn write_atomically(path: &Path, text: &str) -> std::io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let (command, args) = match &cli.command {
        Cmd::Classify(a) => (Command::Classify, a),
        Cmd::ResidualMap(a) => (Command::ResidualMap, a),
        Cmd::Convergence(a) => (Command::Convergence, a),
        Cmd::Table(a) => (Command::Table, a),
    };
    let output = build_job(command, args).and_then(|job| report::run(&job));
    match output {
        Ok(text) => {
            let written = match &args.out {
                Some(path) => write_atomically(path, &text),
                None => {
                    let mut out = std::io::stdout().lock();
                    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                        // a closed pipe (`| head`) is not an error
                        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                        r => r,
                    }
                }
            };
            if let Err(e) = written {
                eprintln!("hyperan: cannot write output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("hyperan: {e}");
            ExitCode::from(report::exit_code(&e) as u8)
        }
    }
}
