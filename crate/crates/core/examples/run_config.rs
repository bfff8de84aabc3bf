//! Library route to what the `geopump` binary does: load a config file, apply
//! an override, run, and emit CSV.
//!
//! `cargo run --release --example run_config -- configs/thermal.json`

use std::path::PathBuf;

use geopump::experiment::{emit, run, Experiment, Format, RunConfig, RunError};

fn main() -> Result<(), RunError> {
    let path = std::env::args().nth(1).map(PathBuf::from);
    let cfg = RunConfig::load(path.as_deref(), &["grids.temperature.count=7".to_string()])?;
    let exp = cfg.experiment.unwrap_or(Experiment::Thermal);
    let table = run(&cfg, exp, None)?;
    print!("{}", String::from_utf8_lossy(&emit(&table, Format::Csv)?));
    Ok(())
}
