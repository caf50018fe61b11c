//! `kitecc`: certified computations on concave kite central
//! configurations, written as reproducible artifacts.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{Mass, MaxDomain, Point};
use config::RunConfig;
use error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "kitecc",
    version,
    about = "Certified kite central configurations"
)]
struct Cli {
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads; 0 uses all cores. Overrides the config file.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output directory. Overrides the config file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certifies the shape of maximal mass and its mass.
    CertifyMax {
        #[arg(long, value_enum, default_value = "d0")]
        domain: MaxDomain,
        /// Cells per dimension of the initial grid.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Certifies that the curve g = 0 has no point with b >= 5/2.
    Exclusion,
    /// Certifies the root b1 of the quintic in (2.75, 2.76).
    RootB1,
    /// Certifies the sign facts used to locate the curve.
    Signs,
    /// Samples the curve b = b(a) and its mass profile.
    Trace {
        #[arg(long, default_value_t = 1.001)]
        a_min: f64,
        #[arg(long, default_value_t = 1.999)]
        a_max: f64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Certifies the minimum and maximum of b and the maximum of the mass.
    Extrema,
    /// Solves for kites with bodies 3 and 4 of mass m (or inf).
    Solve {
        #[arg(long)]
        m: Mass,
        /// Solve the full planar equations instead of the symmetric ones.
        #[arg(long)]
        full_planar: bool,
    },
    /// Classifies the bifurcation at the fold or the pitchfork.
    Classify {
        #[arg(long, value_enum)]
        at: Point,
    },
    /// Regenerates the reference table of positions.
    Table1,
}

/// Input files read by a run, with their contents.
type Inputs = Vec<(PathBuf, Vec<u8>)>;

fn load_config(cli: &Cli) -> Result<(RunConfig, Inputs), CliError> {
    let mut inputs = Vec::new();
    let mut cfg = match &cli.config {
        Some(path) => {
            let bytes = std::fs::read(path)
                .map_err(|e| CliError::BadInput(format!("cannot read {}: {e}", path.display())))?;
            let text = String::from_utf8(bytes.clone())
                .map_err(|_| CliError::BadInput(format!("{} is not UTF-8", path.display())))?;
            inputs.push((path.clone(), bytes));
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(w) = cli.workers {
        cfg.workers = w;
    }
    if let Some(out) = &cli.out {
        cfg.out = out.clone();
    }
    if let Command::CertifyMax { grid: Some(g), .. } = cli.command {
        cfg.campaign.initial_grid = g;
    }
    cfg.validate()?;
    Ok((cfg, inputs))
}

fn run(cli: &Cli, argv: &[String]) -> Result<u8, CliError> {
    let start = Instant::now();
    let (cfg, inputs) = load_config(cli)?;
    let c = cfg.campaign();
    let outcome = match &cli.command {
        Command::CertifyMax { domain, .. } => commands::certify_max(*domain, &c)?,
        Command::Exclusion => commands::exclusion(&c)?,
        Command::RootB1 => commands::root_b1(&c)?,
        Command::Signs => commands::signs(&c)?,
        Command::Trace {
            a_min,
            a_max,
            samples,
        } => commands::trace(*a_min, *a_max, *samples, &c)?,
        Command::Extrema => commands::extrema(&c)?,
        Command::Solve { m, full_planar } => commands::solve(*m, *full_planar, &c)?,
        Command::Classify { at } => commands::classify(*at, &c)?,
        Command::Table1 => commands::table1(&c)?,
    };
    let manifest = output::write_run(&outcome, argv, &cfg, &inputs, start.elapsed().as_secs_f64())?;
    println!(
        "{}",
        serde_json::json!({
            "status": outcome.status,
            "counts": outcome.counts,
            "manifest": manifest,
        })
    );
    Ok(outcome.status.exit_code())
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::BadInput(e.to_string().trim().to_string());
            eprintln!("{}", err.to_json());
            return ExitCode::from(err.exit_code());
        }
    };
    match run(&cli, &argv) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
