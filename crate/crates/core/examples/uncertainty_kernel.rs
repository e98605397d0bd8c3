//! The homogenized kernel `Ā(x, x')` spreads off the diagonal as less of the
//! spectrum is retained. Writes the kernels and their masses to
//! `target/examples/kernel`.

use std::path::Path;

use fourier_homog::experiments::{run_kernel_sweep, write_outputs, ExperimentConfig, ExperimentKind};
use fourier_homog::Result;

pub fn run_example() -> Result<Vec<(f64, f64)>> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::Kernel);
    cfg.nx = 64;
    cfg.schedule = vec![10.0, 30.0, 50.0];
    let sweep = run_kernel_sweep(&cfg)?;
    let mut masses = Vec::new();
    for r in &sweep.records {
        match r.bandwidth_pct {
            Some(p) => {
                println!("{p:>4}% (cutoff {:>2}): off-diagonal mass {:.4}", r.cutoff.unwrap(), r.offdiag_mass);
                masses.push((p, r.offdiag_mass));
            }
            None => println!("full band:          off-diagonal mass {:.2e}", r.offdiag_mass),
        }
    }
    write_outputs(Path::new("target/examples/kernel"), &sweep.files)?;
    Ok(masses)
}

fn main() {
    let m = run_example().expect("kernel example failed");
    assert!(m.windows(2).all(|w| w[0].1 > w[1].1));
}
