//! Dense Hermitian positive-definite solves shared by the homogenizers.

use faer::linalg::solvers::Solve;
use faer::{c64, Mat, Side};

use crate::error::{HomogError, Result};

/// Relative residual every corrector solve must reach.
pub const SOLVE_TOLERANCE: f64 = 1e-10;

/// Condition estimates above this are rejected as numerically singular.
pub const CONDITION_LIMIT: f64 = 1e12;

const MAX_REFINEMENTS: usize = 4;

/// Solution of `G X = R` for Hermitian positive-definite `G`.
#[derive(Debug)]
pub struct HpdSolution {
    pub x: Mat<c64>,
    pub relative_residual: f64,
    pub condition_estimate: f64,
}

/// Cholesky factorization with iterative refinement until the relative
/// Frobenius residual drops below [`SOLVE_TOLERANCE`].
///
/// `min_coefficient` is only used to label a failure.
pub fn solve_hpd(g: &Mat<c64>, rhs: &Mat<c64>, min_coefficient: f64) -> Result<HpdSolution> {
    if g.nrows() == 0 {
        return Ok(HpdSolution {
            x: Mat::zeros(0, rhs.ncols()),
            relative_residual: 0.0,
            condition_estimate: 1.0,
        });
    }
    let llt = g.llt(Side::Lower).map_err(|e| HomogError::IllConditioned {
        min_coefficient,
        detail: format!("Cholesky factorization failed: {e:?}"),
    })?;
    let (lo, hi) = (0..g.nrows()).fold((f64::INFINITY, 0.0_f64), |(lo, hi), i| {
        let d = llt.L()[(i, i)].re;
        (lo.min(d), hi.max(d))
    });
    let condition_estimate = (hi / lo).powi(2);
    if !condition_estimate.is_finite() || condition_estimate > CONDITION_LIMIT {
        return Err(HomogError::IllConditioned {
            min_coefficient,
            detail: format!("condition estimate {condition_estimate:e} exceeds {CONDITION_LIMIT:e}"),
        });
    }
    let rhs_norm = rhs.norm_l2();
    let mut x = llt.solve(rhs);
    if rhs_norm == 0.0 {
        return Ok(HpdSolution {
            x,
            relative_residual: 0.0,
            condition_estimate,
        });
    }
    let mut residual = rhs - g * &x;
    let mut relative_residual = residual.norm_l2() / rhs_norm;
    let mut steps = 0;
    while relative_residual > SOLVE_TOLERANCE && steps < MAX_REFINEMENTS {
        x += llt.solve(&residual);
        residual = rhs - g * &x;
        relative_residual = residual.norm_l2() / rhs_norm;
        steps += 1;
    }
    if relative_residual > SOLVE_TOLERANCE {
        return Err(HomogError::IllConditioned {
            min_coefficient,
            detail: format!("relative residual {relative_residual:e} after {steps} refinements"),
        });
    }
    Ok(HpdSolution {
        x,
        relative_residual,
        condition_estimate,
    })
}
