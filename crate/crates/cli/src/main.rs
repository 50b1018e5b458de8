//! `qaoa-fs`: QAOA feature-selection experiments from the command line.

mod commands;
mod config;
mod failure;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qaoa_core::problem::{EntryDistribution, FeatureSelectionInstance};

use config::{parse_mode, parse_seeds, Config, Overrides, Source};
use failure::Failure;
use output::write_atomic;

#[derive(Debug, Parser)]
#[command(name = "qaoa-fs", version, about = "QAOA and ADAPT-QAOA feature-selection experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run standard and/or ADAPT-QAOA over a sweep of random instances.
    Solve {
        #[command(flatten)]
        sweep: SweepArgs,
        /// `exact`, `shots` or `shots:N`.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Estimate run time and error probability on hardware profiles.
    Estimate {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Built-in device name or JSON device file; repeatable.
        #[arg(long = "device")]
        devices: Vec<String>,
    },
    /// Exact classical optimum of an instance file.
    Oracle {
        /// Instance JSON as written by `gen`.
        instance: PathBuf,
        /// Relative gap at which branch-and-bound stops; 0 searches exhaustively.
        #[arg(long, default_value_t = 0.0)]
        gap: f64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate instance files, one instance from flags or a config sweep.
    Gen {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "results")]
        out_dir: PathBuf,
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long, requires_all = ["alpha", "seed"])]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        alpha: Option<f64>,
        #[arg(long, requires = "n")]
        seed: Option<u64>,
        /// Output file for a single instance; stdout when absent.
        #[arg(long, requires = "n")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// TOML experiment configuration; built-in defaults when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Seed list such as `1-10` or `1,3,5`.
    #[arg(long)]
    seeds: Option<String>,
    /// Maximum QAOA depth.
    #[arg(long)]
    layers: Option<usize>,
}

fn load(config: Option<&Path>, overrides: Overrides) -> Result<(Config, Source), Failure> {
    let (mut cfg, src) = Config::load(config)?;
    cfg.apply(&overrides);
    cfg.validate(&src)?;
    Ok((cfg, src))
}

fn seeds(arg: &Option<String>) -> Result<Option<Vec<u64>>, Failure> {
    arg.as_deref()
        .map(parse_seeds)
        .transpose()
        .map_err(|e| Failure::validation(format!("--seeds: {e}")))
}

fn sweep_overrides(s: &SweepArgs) -> Result<Overrides, Failure> {
    Ok(Overrides {
        seeds: seeds(&s.seeds)?,
        layers: s.layers,
        ..Overrides::default()
    })
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn print_paths(paths: &[PathBuf]) {
    for p in paths {
        println!("{}", p.display());
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { sweep, mode } => {
            let mut o = sweep_overrides(&sweep)?;
            o.mode = mode
                .as_deref()
                .map(parse_mode)
                .transpose()
                .map_err(|e| Failure::validation(format!("--mode: {e}")))?;
            let (cfg, src) = load(sweep.config.as_deref(), o)?;
            print_paths(&commands::solve(&cfg, &src, &sweep.out_dir)?);
        }
        Command::Estimate { sweep, devices } => {
            let mut o = sweep_overrides(&sweep)?;
            o.devices = devices;
            let (cfg, src) = load(sweep.config.as_deref(), o)?;
            print_paths(&commands::estimate(&cfg, &src, &sweep.out_dir)?);
        }
        Command::Oracle { instance, gap, out } => {
            let report = commands::oracle(&instance, gap)?;
            let text = serde_json::to_string_pretty(&report).map_err(|e| Failure::runtime(e.to_string()))?;
            emit(out.as_deref(), &text)?;
        }
        Command::Gen {
            config,
            out_dir,
            seeds: seed_list,
            n,
            alpha,
            seed,
            out,
        } => match (n, alpha, seed) {
            (Some(n), Some(alpha), Some(seed)) => {
                let (cfg, _) = load(config.as_deref(), Overrides::default())?;
                let dist: EntryDistribution = cfg.instance.distribution;
                let inst = FeatureSelectionInstance::generate(n, alpha, seed, dist)?;
                emit(out.as_deref(), &inst.to_json()?)?;
            }
            _ => {
                let o = Overrides {
                    seeds: seeds(&seed_list)?,
                    ..Overrides::default()
                };
                let (cfg, _) = load(config.as_deref(), o)?;
                print_paths(&commands::generate_sweep(&cfg, &out_dir)?);
            }
        },
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = match e {
                Failure::Validation(_) => "invalid input",
                Failure::Runtime(_) => "error",
            };
            eprintln!("qaoa-fs: {kind}: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
