//! Bandwidth sweeps, kernel sweeps and 2D panels, written as CSV.
//!
//! Every run is a pure function of its [`ExperimentConfig`]: the same config
//! produces the same bytes.

mod config;
mod csv;
mod run;

pub use config::{
    cutoff_for, parse_schedule, ExperimentConfig, ExperimentKind, GeneratorSpec, MAX_BANDWIDTH_PCT,
    REFERENCE_SEED,
};
pub use csv::{fmt_f64, parse_sweep_csv, sweep_to_csv, GridCsv, Method, SweepRecord, SWEEP_HEADER};
pub use run::{
    run_kernel_sweep, run_panels_2d, run_sweep_1d, run_sweep_2d, KernelRecord, KernelSweep,
    OutputFile, Panels2D, SweepOutput,
};

use std::path::Path;

use crate::error::Result;

/// Writes each file under `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, files: &[OutputFile]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    for f in files {
        std::fs::write(dir.join(&f.name), &f.contents)?;
    }
    Ok(())
}
