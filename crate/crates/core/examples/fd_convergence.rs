//! Grid refinement of the 2D finite-difference solver on a manufactured
//! solution with a full, spatially varying tensor.

use std::f64::consts::PI;

use fourier_homog::solvers::{solve_fd, BoundaryConditions2D, NodalTensor};
use fourier_homog::Result;

fn exact(x: f64, y: f64) -> f64 {
    1.0 - x + 0.5 * (PI * x).sin() * (2.0 * PI * y).cos()
}

fn tensor(x: f64, y: f64) -> [f64; 4] {
    let c = 0.25 * (PI * x).cos();
    [2.0 + x + 0.5 * (2.0 * PI * y).cos(), c, c, 1.5 + 0.5 * (PI * x).sin()]
}

/// `∇·(A ∇u*)` in closed form.
fn source(x: f64, y: f64) -> f64 {
    let (sx, cx) = (PI * x).sin_cos();
    let (s2y, c2y) = (2.0 * PI * y).sin_cos();
    let ux = -1.0 + 0.5 * PI * cx * c2y;
    let uy = -PI * sx * s2y;
    let uxx = -0.5 * PI * PI * sx * c2y;
    let uyy = -2.0 * PI * PI * sx * c2y;
    let uxy = -PI * PI * cx * s2y;
    let [axx, axy, _, ayy] = tensor(x, y);
    // ∂x A_xx = 1, ∂y A_yy = 0, ∂x A_xy = -π/4 sin πx, ∂y A_yx = 0.
    ux + axx * uxx - 0.25 * PI * sx * uy + 2.0 * axy * uxy + ayy * uyy
}

pub fn max_error(n: usize) -> Result<f64> {
    let t = NodalTensor::from_fn(n, n, tensor)?;
    let node = |k: usize| k as f64 / n as f64;
    let f: Vec<f64> = (0..=n)
        .flat_map(|j| (0..=n).map(move |i| source(node(i), node(j))))
        .collect();
    let u = solve_fd(&t, &BoundaryConditions2D::default(), Some(&f), 1e-12)?;
    let mut err = 0.0_f64;
    for j in 0..=n {
        for i in 0..=n {
            err = err.max((u.at(i, j) - exact(node(i), node(j))).abs());
        }
    }
    Ok(err)
}

pub fn run_example() -> Result<Vec<f64>> {
    let mut orders = Vec::new();
    let mut prev: Option<f64> = None;
    for n in [16, 32, 64] {
        let e = max_error(n)?;
        match prev {
            Some(p) => {
                let order = (p / e).log2();
                println!("n = {n:>3}: max error {e:.3e}, order {order:.3}");
                orders.push(order);
            }
            None => println!("n = {n:>3}: max error {e:.3e}"),
        }
        prev = Some(e);
    }
    Ok(orders)
}

fn main() {
    let orders = run_example().expect("convergence example failed");
    assert!(orders.iter().all(|o| (1.8..=2.2).contains(o)));
}
