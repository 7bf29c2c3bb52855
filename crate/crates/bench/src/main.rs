use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use psso_bench::{
    parse_csv, render, run_experiments, sweep, BenchError, ExperimentConfig, ReportFormat,
    ResultRow, SweepAxis,
};

#[derive(Parser)]
#[command(
    name = "psso",
    version,
    about = "GA attacks on graphs: run, sweep and report experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment in a config file.
    Run {
        config: PathBuf,
        /// Write CSV rows here (overrides the config's `output`).
        #[arg(long)]
        output: Option<PathBuf>,
        /// Format printed to stdout.
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Re-run the config's first experiment once per value of one axis.
    Sweep {
        config: PathBuf,
        /// pop_size or pn
        #[arg(long)]
        axis: String,
        /// Comma-separated ascending values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value = "table")]
        format: String,
    },
    /// Render a CSV file of result rows.
    Report {
        rows: PathBuf,
        #[arg(long, default_value = "table")]
        format: String,
    },
}

fn emit(rows: &[ResultRow], format: &str, output: Option<&Path>) -> Result<(), BenchError> {
    let format: ReportFormat = format.parse()?;
    if let Some(path) = output {
        std::fs::write(path, render(rows, ReportFormat::Csv)?)?;
        log::info!("wrote {} rows to {}", rows.len(), path.display());
    }
    print!("{}", render(rows, format)?);
    Ok(())
}

fn execute(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Run {
            config,
            output,
            format,
        } => {
            let cfgs = ExperimentConfig::load(&config)?;
            format.parse::<ReportFormat>()?;
            let rows = run_experiments(&cfgs)?;
            let output = output.or_else(|| cfgs[0].output.clone());
            emit(&rows, &format, output.as_deref())
        }
        Command::Sweep {
            config,
            axis,
            values,
            output,
            format,
        } => {
            let cfgs = ExperimentConfig::load(&config)?;
            let axis: SweepAxis = axis.parse()?;
            format.parse::<ReportFormat>()?;
            let rows = sweep(&cfgs[0], axis, &values)?;
            let output = output.or_else(|| cfgs[0].output.clone());
            emit(&rows, &format, output.as_deref())
        }
        Command::Report { rows, format } => {
            let text = std::fs::read_to_string(&rows)
                .map_err(|e| BenchError::Config(format!("{}: {e}", rows.display())))?;
            let parsed = parse_csv(&text)?;
            emit(&parsed, &format, None)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
