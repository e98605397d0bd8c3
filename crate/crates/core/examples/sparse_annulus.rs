//! Coefficient with all its power on an annulus of wavenumbers. Raw filtering
//! sees nothing until the cutoff reaches the annulus; homogenization does.

use fourier_homog::experiments::{run_sweep_2d, ExperimentConfig, ExperimentKind, GeneratorSpec, Method};
use fourier_homog::Result;

pub fn run_example() -> Result<Vec<(usize, f64, f64)>> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::Sweep2d);
    cfg.nx = 32;
    cfg.ny = 32;
    cfg.generator = GeneratorSpec::SparseAnnulus {
        seed: 42,
        k_min: 4,
        k_max: 6,
        amplitude: 0.1,
        water_level: 0.5,
    };
    cfg.schedule = vec![0.0, 12.5, 25.0, 50.0];
    let out = run_sweep_2d(&cfg)?;
    println!("{:>6} {:>12} {:>12}", "cutoff", "homog L2", "raw L2");
    let mut rows = Vec::new();
    for &p in &cfg.schedule {
        let h = out.get(p, Method::Homogenized).unwrap();
        let r = out.get(p, Method::RawFiltered).unwrap();
        let (hl2, rl2) = (h.l2.unwrap_or(f64::NAN), r.l2.unwrap_or(f64::NAN));
        println!("{:>6} {hl2:>12.4e} {rl2:>12.4e}", h.cutoff);
        rows.push((h.cutoff, hl2, rl2));
    }
    Ok(rows)
}

fn main() {
    run_example().expect("annulus example failed");
}
