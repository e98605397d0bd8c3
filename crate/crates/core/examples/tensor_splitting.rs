//! Layered 2D medium: the homogenized tensor splits into the harmonic mean
//! across the layers and the arithmetic mean along them.

use fourier_homog::coefficients::gen_periodic;
use fourier_homog::homogenize2d::{homogenize_2d, Basis2D};
use fourier_homog::{GridSpec, Result};

pub fn run_example() -> Result<[f64; 4]> {
    let grid = GridSpec::new_2d(32, 32)?;
    let a = gen_periodic(grid, 1.0, 4.0, 8)?;
    let t = homogenize_2d(&a, &Basis2D::new(grid, 0, 0)?)?;
    let v = [t.xx()[0], t.xy()[0], t.yx()[0], t.yy()[0]];
    println!("[[{:.6}, {:.1e}],", v[0], v[1]);
    println!(" [{:.1e}, {:.6}]]", v[2], v[3]);
    println!("harmonic {:.6}, arithmetic {:.6}", a.harmonic_mean(), a.mean());
    println!("block-sparse fine solve: {}", t.diagnostics().block_sparse);
    Ok(v)
}

fn main() {
    let v = run_example().expect("tensor example failed");
    assert!((v[0] - 1.6).abs() < 1e-10 && (v[3] - 2.5).abs() < 1e-10);
}
