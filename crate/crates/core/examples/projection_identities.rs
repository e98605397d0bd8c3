//! Coarse/fine projections of a random vector: `PP* = I`, `QQ* = I`,
//! `PQ* = 0` and `P*P + Q*Q = I`.

use fourier_homog::spectral_ops::{apply_p, apply_p_adjoint, apply_q, apply_q_adjoint};
use fourier_homog::{ProjectionBasis, Result};
use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn run_example() -> Result<f64> {
    let n = 64;
    let basis = ProjectionBasis::new(n, 10)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let v: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random(), rng.random())).collect();
    let w: Vec<Complex64> = (0..basis.coarse_count()).map(|_| Complex64::new(rng.random(), 0.0)).collect();
    let z: Vec<Complex64> = (0..basis.fine_count()).map(|_| Complex64::new(0.0, rng.random())).collect();

    let ppstar = max_diff(&apply_p(&apply_p_adjoint(&w, &basis)?, &basis)?, &w);
    let qqstar = max_diff(&apply_q(&apply_q_adjoint(&z, &basis)?, &basis)?, &z);
    let pqstar = apply_p(&apply_q_adjoint(&z, &basis)?, &basis)?
        .iter()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    let coarse = apply_p_adjoint(&apply_p(&v, &basis)?, &basis)?;
    let fine = apply_q_adjoint(&apply_q(&v, &basis)?, &basis)?;
    let sum: Vec<Complex64> = coarse.iter().zip(&fine).map(|(a, b)| a + b).collect();
    let partition = max_diff(&sum, &v);

    println!("n = {n}, coarse modes {}, fine modes {}", basis.coarse_count(), basis.fine_count());
    println!("|PP* w - w|         = {ppstar:.2e}");
    println!("|QQ* z - z|         = {qqstar:.2e}");
    println!("|PQ* z|             = {pqstar:.2e}");
    println!("|P*Pv + Q*Qv - v|   = {partition:.2e}");
    Ok([ppstar, qqstar, pqstar, partition].into_iter().fold(0.0, f64::max))
}

fn main() {
    let worst = run_example().expect("projection example failed");
    assert!(worst < 1e-12);
}
