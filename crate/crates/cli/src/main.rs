//! `tomo`: travel-time tomography simulator for a disk-shaped domain with
//! one reflecting circular obstacle.

use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use brt_core::experiment::{run_comparison, ComparisonSummary, ExperimentConfig, Mode};

#[derive(Parser)]
#[command(name = "tomo", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run all trials of the mode set in the config and write its artifacts
    Run(CommonArgs),
    /// Run several ray models at a matched measurement budget and compare
    Compare(CompareArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON experiment config; without it the built-in desk-scale setup runs
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override the seed of the config
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for summary.csv and the per-trial artifacts
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Comma-separated ray models to compare
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "art,brt_specular,brt_lambertian",
        value_parser = parse_mode
    )]
    modes: Vec<Mode>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e| format!("{e} (expected one of art, brt_specular, brt_lambertian)"))
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Run(args) => {
            let config = load_config(&args)?;
            let summary = run_comparison(&config, &[config.mode], Some(&args.out_dir))?;
            print_summary(&summary, &args);
        }
        Command::Compare(args) => {
            let config = load_config(&args.common)?;
            let summary = run_comparison(&config, &args.modes, Some(&args.common.out_dir))?;
            print_summary(&summary, &args.common);
        }
    }
    Ok(())
}

fn load_config(args: &CommonArgs) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::load(path)
            .with_context(|| format!("cannot load config {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    Ok(config)
}

fn print_summary(summary: &ComparisonSummary, args: &CommonArgs) {
    println!("{:<16} {:>5} {:>13} {:>12} {:>10}", "mode", "trial", "error", "projections", "wall_ms");
    for r in &summary.reports {
        println!(
            "{:<16} {:>5} {:>13.6e} {:>12} {:>10.1}",
            r.mode.to_string(),
            r.trial,
            r.error,
            r.projections,
            r.wall_ms
        );
    }
    for a in &summary.averages {
        println!(
            "{:<16} {:>5} {:>13.6e} {:>12.1} {:>10.1}",
            a.mode.to_string(),
            "avg",
            a.mean_error,
            a.mean_projections,
            a.mean_wall_ms
        );
    }
    println!("artifacts written to {}", args.out_dir.display());
}
