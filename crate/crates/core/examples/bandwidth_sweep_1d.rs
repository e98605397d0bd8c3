//! Solution error of homogenized and raw-filtered coefficients against the
//! exact 1D solution, as a function of the retained bandwidth.

use fourier_homog::experiments::{run_sweep_1d, ExperimentConfig, ExperimentKind, Method};
use fourier_homog::Result;

pub fn run_example() -> Result<Vec<(f64, f64, f64)>> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::Sweep1d);
    cfg.nx = 128;
    cfg.schedule = vec![0.0, 10.0, 20.0, 40.0, 60.0];
    let out = run_sweep_1d(&cfg)?;
    println!("{:>6} {:>12} {:>12}", "band%", "homog L2", "raw L2");
    let mut rows = Vec::new();
    for &p in &cfg.schedule {
        let h = out.get(p, Method::Homogenized).and_then(|r| r.l2).unwrap_or(f64::NAN);
        let r = out.get(p, Method::RawFiltered).and_then(|r| r.l2).unwrap_or(f64::NAN);
        println!("{p:>6} {h:>12.4e} {r:>12.4e}");
        rows.push((p, h, r));
    }
    Ok(rows)
}

fn main() {
    run_example().expect("sweep example failed");
}
