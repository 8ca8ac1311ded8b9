use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use helicoid_cli::{commands, CliError, JobConfig};

/// Equivariant CMC cylinders: invariant checks, L scans, period solving and meshes.
#[derive(Parser)]
#[command(name = "helicoid", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Flat key = value job file; defaults are used for missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; overrides `out` in the config. Standard output if neither is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Tolerance override, `name=value`; repeatable.
    #[arg(long = "tol", global = true)]
    tol: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Run the invariant suite; exit 1 if any check fails.
    Check,
    /// Tabulate L(t) as CSV.
    #[command(name = "scan-L")]
    ScanL,
    /// Solve the closing conditions and list verified solutions as JSON.
    Solve,
    /// Write an OBJ mesh of the surface and a JSON sidecar.
    Mesh,
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let mut cfg = match &cli.config {
        Some(p) => JobConfig::parse(&fs::read_to_string(p).map_err(|e| CliError::Io(p.clone(), e))?)?,
        None => JobConfig::default(),
    };
    for spec in &cli.tol {
        cfg.apply_override(spec)?;
    }
    let out = cli.out.clone().or_else(|| cfg.out.clone());
    let out = out.as_deref();
    match cli.cmd {
        Cmd::Check => commands::check(&cfg, out),
        Cmd::ScanL => commands::scan(&cfg, out).map(|_| true),
        Cmd::Solve => commands::solve(&cfg, out).map(|_| true),
        Cmd::Mesh => commands::mesh(&cfg, out).map(|_| true),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("helicoid: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
