use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use geopump::experiment::{emit, run, write_output, Experiment, Format, RunConfig, RunError};

/// Run a geometric-pumping experiment and write its table.
#[derive(Parser, Debug)]
#[command(name = "geopump", version)]
struct Cli {
    experiment: Experiment,

    /// JSON run configuration (defaults are used for missing fields).
    #[arg(long)]
    config: Option<PathBuf>,

    /// Override a config field, e.g. `--set drive.eps0=-0.95`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[arg(long, value_enum, default_value = "csv")]
    format: Format,

    /// Output path, `-` for stdout. Overrides `output_path` in the config.
    #[arg(long)]
    out: Option<String>,

    /// Worker threads (default: available parallelism).
    #[arg(long, env = "GEOPUMP_WORKERS")]
    workers: Option<usize>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: &Cli) -> Result<(), RunError> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    if let Some(out) = &cli.out {
        cfg.output_path = out.clone();
    }
    let table = run(&cfg, cli.experiment, cli.workers)?;
    let bytes = emit(&table, cli.format)?;
    write_output(&bytes, &cfg.output_path)?;
    if cfg.output_path != "-" {
        log::info!("wrote {}", cfg.output_path);
    }
    Ok(())
}
