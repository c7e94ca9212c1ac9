//! Command-line entry point: run configs, compare output directories,
//! validate configs. Exit codes: 0 success, 2 tolerance failure, 3
//! config/regime/capacity error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use kinkchain::runner;

#[derive(Parser)]
#[command(name = "kinkchain", version, about = "Quench dynamics of an open Ising chain with confinement and kink-kinetic terms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a run config and write CSV outputs plus a manifest.
    Run { config: PathBuf },
    /// Compare the output CSVs of two run directories.
    Compare {
        dir_a: PathBuf,
        dir_b: PathBuf,
        /// Max-deviation tolerance; omit to report without failing.
        #[arg(long)]
        tol: Option<f64>,
        /// Report deviations without affecting the exit status.
        #[arg(long)]
        observe: bool,
        /// Where to write the deviation summary CSV.
        #[arg(long, default_value = "deviation_summary.csv")]
        out: PathBuf,
    },
    /// Dry-run schema and capacity check of a config.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(3)
        }
    }
}

fn dispatch(cli: Cli) -> kinkchain::Result<ExitCode> {
    match cli.command {
        Command::Run { config } => {
            let cfg = runner::RunConfig::load(&config)?;
            let report = runner::run(&cfg)?;
            println!(
                "wrote {} samples to {}",
                report.samples,
                report.output_dir.display()
            );
            if let Some(cmp) = &report.comparison {
                for row in &cmp.rows {
                    println!(
                        "compare {}: max {:.3e} rms {:.3e}",
                        row.quantity, row.max_dev, row.rms_dev
                    );
                }
                if !cmp.passed {
                    eprintln!(
                        "comparison exceeded tolerance {:.3e}",
                        cmp.tol.unwrap_or(f64::NAN)
                    );
                    return Ok(ExitCode::from(2));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { dir_a, dir_b, tol, observe, out } => {
            let rows = runner::compare_dirs(&dir_a, &dir_b)?;
            runner::write_deviation_summary(&out, &rows)?;
            let mut worst = 0.0f64;
            for row in &rows {
                println!("{}: max {:.3e} rms {:.3e}", row.quantity, row.max_dev, row.rms_dev);
                worst = worst.max(row.max_dev);
            }
            match tol {
                Some(t) if worst >= t && !observe => {
                    eprintln!("max deviation {worst:.3e} exceeds tolerance {t:.3e}");
                    Ok(ExitCode::from(2))
                }
                _ => Ok(ExitCode::SUCCESS),
            }
        }
        Command::Validate { config } => {
            let cfg = runner::RunConfig::load(&config)?;
            cfg.resolve()?;
            println!("ok: {}", config.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}
