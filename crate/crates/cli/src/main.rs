//! `eigencond` command-line tool.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when the input is
//! numerically ill-posed (clustered spectrum, duplicate points, ...).

mod commands;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use eigencond::conditioning::NormKind;
use eigencond::extremal::Exponent;

#[derive(Parser, Debug)]
#[command(name = "eigencond", version, about = "Eigenvalue condition numbers and lattice-point spectra")]
struct Cli {
    /// Worker threads; `--threads 1` gives bit-stable output.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Seed for randomized subcommands.
    #[arg(long, global = true, env = "EIGENCOND_SEED", default_value_t = 0)]
    seed: u64,

    /// Write the run manifest (JSON) here instead of stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(untagged)]
enum Command {
    /// Triangular-lattice points by increasing modulus.
    Lattice(LatticeArgs),
    /// Per-eigenpair condition numbers of a matrix.
    Cond(CondArgs),
    /// Random perturbations against the first-order bounds.
    Perturb(PerturbArgs),
    /// Convergence of S_p towards its leading-order constant.
    Asymptotics(AsymptoticsArgs),
    /// Search for configurations with small S_p.
    Optimize(OptimizeArgs),
    /// Headline constants for the first n lattice points.
    Reproduce(ReproduceArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Lattice(_) => "lattice",
            Command::Cond(_) => "cond",
            Command::Perturb(_) => "perturb",
            Command::Asymptotics(_) => "asymptotics",
            Command::Optimize(_) => "optimize",
            Command::Reproduce(_) => "reproduce",
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[command(group(ArgGroup::new("size").required(true).args(["n", "r"])))]
struct LatticeArgs {
    /// First n points.
    #[arg(long)]
    n: Option<usize>,
    /// All points in the disk of radius r.
    #[arg(long)]
    r: Option<f64>,
    /// Leave out points on the circle |z| = r.
    #[arg(long, requires = "r")]
    open: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct Tolerance {
    /// Relative tolerance for accepting an eigenvalue.
    #[arg(long, default_value_t = 1e-8)]
    tol_eig: f64,
    /// Relative distance under which eigenvalues count as clustered.
    #[arg(long, default_value_t = 1e-8)]
    tol_cluster: f64,
    /// Relative tolerance on the Schur block form.
    #[arg(long, default_value_t = 1e-8)]
    tol_block: f64,
}

#[derive(Args, Debug, Serialize)]
#[command(group(ArgGroup::new("input").required(true).args(["matrix", "diag"])))]
struct MatrixInput {
    /// Matrix file: a line with n, then n·n lines `re im`.
    matrix: Option<PathBuf>,
    /// Use Diag(z) for a configuration CSV with `re,im` columns.
    #[arg(long)]
    diag: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct CondArgs {
    #[command(flatten)]
    #[serde(flatten)]
    input: MatrixInput,
    #[command(flatten)]
    #[serde(flatten)]
    tol: Tolerance,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct PerturbArgs {
    #[command(flatten)]
    #[serde(flatten)]
    input: MatrixInput,
    /// Relative perturbation size ε.
    #[arg(long)]
    eps: f64,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// frob or op.
    #[arg(long, default_value = "frob")]
    norm: NormKind,
    #[command(flatten)]
    #[serde(flatten)]
    tol: Tolerance,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum Generator {
    Lattice,
    File,
}

#[derive(Args, Debug, Serialize)]
struct AsymptoticsArgs {
    /// Exponent p (a positive number or `inf`).
    #[arg(long)]
    p: Exponent,
    /// Comma-separated, strictly increasing n values.
    #[arg(long, value_delimiter = ',', required = true)]
    n_list: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Generator::Lattice)]
    generator: Generator,
    /// Configuration CSV for `--generator file`; the first n rows are used.
    #[arg(long, required_if_eq("generator", "file"))]
    file: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
enum InitKind {
    Lattice,
    Random,
    File,
}

#[derive(Args, Debug, Serialize)]
struct OptimizeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "2")]
    p: Exponent,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, value_enum, default_value_t = InitKind::Lattice)]
    init: InitKind,
    /// Starting configuration for `--init file`.
    #[arg(long, required_if_eq("init", "file"))]
    init_file: Option<PathBuf>,
    /// Comma-separated soft-min sharpness per stage.
    #[arg(long, value_delimiter = ',')]
    beta_schedule: Option<Vec<f64>>,
    /// Comma-separated initial step per stage.
    #[arg(long, value_delimiter = ',')]
    step_schedule: Option<Vec<f64>>,
    #[arg(long)]
    max_iters: Option<usize>,
    #[arg(long)]
    polish_rounds: Option<usize>,
    /// Best configuration as CSV `re,im` (stdout if absent).
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// JSON-lines trace of the winning restart.
    #[arg(long, default_value = "trace.jsonl")]
    trace: PathBuf,
}

#[derive(Args, Debug, Serialize)]
struct ReproduceArgs {
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunManifest {
    subcommand: &'static str,
    parameters: serde_json::Value,
    seed: u64,
    threads: Option<usize>,
    tool_version: &'static str,
    output_paths: Vec<String>,
    summary: serde_json::Value,
}

/// What a subcommand produced, for the manifest.
pub struct Outcome {
    pub outputs: Vec<String>,
    pub summary: serde_json::Value,
}

fn write_manifest(cli: &Cli, outcome: Outcome) -> eigencond::Result<()> {
    let manifest = RunManifest {
        subcommand: cli.command.name(),
        parameters: serde_json::to_value(&cli.command).map_err(io::Error::other)?,
        seed: cli.seed,
        threads: cli.threads,
        tool_version: env!("CARGO_PKG_VERSION"),
        output_paths: outcome.outputs,
        summary: outcome.summary,
    };
    match &cli.manifest {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            serde_json::to_writer_pretty(&mut w, &manifest).map_err(io::Error::other)?;
            writeln!(w)?;
            w.flush()?;
        }
        None => {
            let line = serde_json::to_string(&manifest).map_err(io::Error::other)?;
            eprintln!("{line}");
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> eigencond::Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(eigencond::Error::InvalidInput("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| eigencond::Error::InvalidInput(e.to_string()))?;
    }
    let outcome = match &cli.command {
        Command::Lattice(a) => commands::lattice(a)?,
        Command::Cond(a) => commands::cond(a)?,
        Command::Perturb(a) => commands::perturb(a, cli.seed)?,
        Command::Asymptotics(a) => commands::asymptotics(a)?,
        Command::Optimize(a) => commands::optimize(a, cli.seed)?,
        Command::Reproduce(a) => commands::reproduce(a)?,
    };
    write_manifest(cli, outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_ill_posed() { 2 } else { 1 })
        }
    }
}
