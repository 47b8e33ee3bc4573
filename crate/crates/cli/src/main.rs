mod commands;
mod failure;
mod text;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::Report;
use crate::failure::Failure;

#[derive(Parser, Debug)]
#[command(name = "pvcoh", version, about = "PV, Čech and spectral-sequence cohomology of 1D aperiodic tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    /// Report format; `dot` is only available for `approximants`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

/// Where the tiling (or complex) comes from.
#[derive(Args, Debug, Clone)]
pub struct Source {
    /// Slope of a cut-and-project tiling: `golden`, `silver`, `a,b,c,n` for
    /// (a + b√n)/c, or a continued fraction prefix `[a0;a1,a2,...]`.
    #[arg(long)]
    pub alpha: Option<String>,

    /// JSON tiling spec; `cohomology` and `ahss` also accept a Δ-complex file.
    #[arg(long)]
    pub input: Option<PathBuf>,

    /// Number of points sampled for `--alpha`.
    #[arg(long, default_value_t = 6000)]
    pub points: usize,
}

#[derive(Args, Debug, Clone)]
pub struct Levels {
    /// Levels of the proper sequence, counting the prototile space.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub levels: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a tiling sample.
    Generate {
        #[command(flatten)]
        source: Source,
    },
    /// Build a proper sequence of patch spaces.
    Approximants {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
    },
    /// Simplicial cohomology per level and the Čech limit.
    Cohomology {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
    },
    /// PV cohomology per level, the hull limit and its certificates.
    Pv {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
    },
    /// Normal forms on the Cantor circle and the frequency module.
    CantorCircle {
        #[arg(long)]
        alpha: String,
        /// Number of arcs [0, kα') to reduce.
        #[arg(long, default_value_t = 8)]
        resolution: usize,
        /// A function `{"terms": [[c, "circle" | [l, m]], ...]}` to reduce.
        #[arg(long)]
        function: Option<PathBuf>,
    },
    /// Koszul complex of a Z^d Cantor system.
    Koszul {
        /// System file.
        #[arg(long)]
        system: PathBuf,
        /// Dimension; fills in a missing `d` and must match a given one.
        #[arg(long)]
        d: Option<usize>,
        /// Largest resolution of the direct limit (at least 2).
        #[arg(long, default_value_t = 4)]
        resolution: usize,
    },
    /// Spectral pages of the skeleton filtration.
    Ahss {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
        /// Last page to compute.
        #[arg(long, default_value_t = 6)]
        max_page: usize,
    },
    /// Run every cross-check; exits 0 iff all certificates pass.
    Verify {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        levels: Levels,
        /// Largest Koszul resolution.
        #[arg(long, default_value_t = 4)]
        resolution: usize,
        /// Seed of the randomized normal-form checks.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn check_threads() -> Result<(), Failure> {
    match std::env::var("PVCOH_THREADS") {
        Err(_) => Ok(()),
        Ok(v) => match v.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(Failure::usage(format!("PVCOH_THREADS must be a positive integer, got {v:?}"))),
        },
    }
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    check_threads()?;
    let levels = |l: &Levels| l.levels as usize;
    match &cli.command {
        Command::Generate { source } => commands::generate(source),
        Command::Approximants { source, levels: l } => commands::approximants(source, levels(l)),
        Command::Cohomology { source, levels: l } => commands::cohomology(source, levels(l)),
        Command::Pv { source, levels: l } => commands::pv(source, levels(l)),
        Command::CantorCircle { alpha, resolution, function } => {
            commands::cantor_circle(alpha, *resolution, function.as_deref())
        }
        Command::Koszul { system, d, resolution } => commands::koszul(system, *d, *resolution),
        Command::Ahss { source, levels: l, max_page } => commands::ahss(source, levels(l), *max_page),
        Command::Verify { source, levels: l, resolution, seed } => {
            commands::verify(source, levels(l), *resolution, *seed)
        }
    }
}

fn render(report: &Report, format: Format) -> Result<String, Failure> {
    match (format, report) {
        (Format::Json, r) => Ok(serde_json::to_string_pretty(&r.json).expect("JSON values serialize")),
        (Format::Text, r) => Ok(text::flatten(&r.json)),
        (Format::Dot, Report { dot: Some(dot), .. }) => Ok(dot.clone()),
        (Format::Dot, _) => Err(Failure::usage("DOT output is only available for `approximants`")),
    }
}

fn emit(cli: &Cli) -> Result<bool, Failure> {
    let report = run(cli)?;
    let mut body = render(&report, cli.format)?;
    if !body.ends_with('\n') {
        body.push('\n');
    }
    match &cli.output {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::io(path, &e))?,
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::io("stdout", &e))?,
    }
    Ok(report.success)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return Failure::usage(e.to_string().trim_end()).report(),
    };
    match emit(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => f.report(),
    }
}
