//! The three coefficient families on small grids, with their summary numbers.

use fourier_homog::coefficients::{gen_filtered_random, gen_periodic, gen_sparse_annulus};
use fourier_homog::{CoefficientField, GridSpec, Result};

fn summary(a: &CoefficientField) {
    println!(
        "{:<60} min {:.4} max {:.4} mean {:.4} harmonic {:.4}",
        a.provenance().describe(),
        a.min(),
        a.max(),
        a.mean(),
        a.harmonic_mean()
    );
}

pub fn run_example() -> Result<Vec<CoefficientField>> {
    let g1 = GridSpec::new_1d(256)?;
    let g2 = GridSpec::new_2d(64, 64)?;
    let fields = vec![
        gen_periodic(g1, 1.0, 4.0, 32)?,
        gen_filtered_random(g1, 42, 0.1)?,
        gen_filtered_random(g2, 42, 0.1)?,
        gen_sparse_annulus(g2, 42, 8, 12, 0.05, 0.5)?,
    ];
    fields.iter().for_each(summary);
    Ok(fields)
}

fn main() {
    run_example().expect("generator example failed");
}
