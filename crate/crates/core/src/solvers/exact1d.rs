use crate::coefficients::CoefficientField;
use crate::error::{HomogError, Result};

use super::SolveResult;

/// Exact solution of `(a u')' = 0` on `[0, 1]` with `u(0) = 0`, `u(1) = 1`:
///
/// ```text
/// u(x) = ∫₀ˣ a⁻¹ / ∫₀¹ a⁻¹
/// ```
///
/// evaluated by cumulative trapezoidal quadrature over the `n` periodic cells,
/// with `a(1) = a(0)`. Returns `n + 1` nodal values.
pub fn exact_diffusion_1d(a: &CoefficientField) -> Result<SolveResult> {
    if a.grid().is_2d() {
        return Err(HomogError::InvalidGrid("exact_diffusion_1d expects a 1D coefficient".into()));
    }
    let v = a.values();
    let n = v.len();
    let inv = |i: usize| 1.0 / v[i % n];
    let mut u = Vec::with_capacity(n + 1);
    u.push(0.0);
    let mut acc = 0.0;
    for i in 0..n {
        acc += 0.5 * (inv(i) + inv(i + 1));
        u.push(acc);
    }
    let total = acc;
    u.iter_mut().for_each(|x| *x /= total);
    u[n] = 1.0;

    // Face flux with the harmonic face coefficient; constant for the exact solution.
    let h = 1.0 / n as f64;
    let flux: Vec<f64> = (0..n)
        .map(|i| {
            let face = 2.0 / (inv(i) + inv(i + 1));
            face * (u[i + 1] - u[i]) / h
        })
        .collect();
    let mean = flux.iter().sum::<f64>() / n as f64;
    let defect = flux.iter().map(|f| (f - mean).abs()).fold(0.0, f64::max) / mean.abs();
    Ok(SolveResult {
        nodes_x: n + 1,
        nodes_y: 1,
        values: u,
        residual_norm: defect,
        converged: true,
        diagnostics: Vec::new(),
    })
}
