//! Exact, homogenized and filtered 2D solutions for one bandwidth, written as
//! grid CSVs to `target/examples/panels`.

use std::path::Path;

use fourier_homog::experiments::{run_panels_2d, write_outputs, ExperimentConfig, ExperimentKind};
use fourier_homog::Result;

pub fn run_example() -> Result<(f64, f64)> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::Panels2d);
    cfg.nx = 32;
    cfg.ny = 32;
    cfg.bandwidth = 25.0;
    let p = run_panels_2d(&cfg)?;
    let amax = |name: &str| {
        p.grid(name)
            .map(|g| g.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())))
            .unwrap_or(f64::NAN)
    };
    let (h, r) = (amax("diff_homogenized"), amax("diff_filtered"));
    println!("max |u_homogenized - u| = {h:.3e}");
    println!("max |u_filtered - u|    = {r:.3e}");
    for f in &p.flags {
        println!("flag: {f}");
    }
    write_outputs(Path::new("target/examples/panels"), &p.files)?;
    Ok((h, r))
}

fn main() {
    run_example().expect("panels example failed");
}
