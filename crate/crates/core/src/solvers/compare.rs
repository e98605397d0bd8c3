use crate::error::{HomogError, Result};
use crate::spectral_ops::{coarse_project, ProjectionBasis};

use super::SolveResult;

/// Relative errors `‖model - full‖_p / ‖full‖_p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
}

/// Which field the errors are measured on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CompareMode {
    /// Every node of both solutions.
    #[default]
    Full,
    /// `ū = P*P u` of both solutions (1D only). The linear Dirichlet
    /// interpolant is removed before projecting so the remainder is periodic.
    Coarse,
}

impl CompareMode {
    pub fn name(&self) -> &'static str {
        match self {
            CompareMode::Full => "full",
            CompareMode::Coarse => "coarse",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(CompareMode::Full),
            "coarse" => Ok(CompareMode::Coarse),
            _ => Err(HomogError::InvalidParameter(format!("unknown comparison mode {s:?}"))),
        }
    }
}

fn check_shape(full: &SolveResult, model: &SolveResult) -> Result<()> {
    if full.nodes_x != model.nodes_x || full.nodes_y != model.nodes_y {
        return Err(HomogError::DimensionMismatch {
            expected: full.values.len(),
            got: model.values.len(),
        });
    }
    Ok(())
}

fn relative_norms(full: &[f64], model: &[f64]) -> Result<ErrorNorms> {
    let (mut d1, mut d2, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0);
    for (f, m) in full.iter().zip(model) {
        let d = m - f;
        d1 += d.abs();
        d2 += d * d;
        r1 += f.abs();
        r2 += f * f;
    }
    if r1 == 0.0 {
        return Err(HomogError::UndefinedRatio("reference solution has zero norm".into()));
    }
    Ok(ErrorNorms {
        l1: d1 / r1,
        l2: (d2 / r2).sqrt(),
    })
}

/// Full-field relative errors.
pub fn compare_solutions(full: &SolveResult, model: &SolveResult) -> Result<ErrorNorms> {
    check_shape(full, model)?;
    relative_norms(&full.values, &model.values)
}

fn project_nodal(u: &SolveResult, basis: &ProjectionBasis) -> Result<Vec<f64>> {
    let n = u.nodes_x - 1;
    if u.nodes_y != 1 {
        return Err(HomogError::InvalidParameter("coarse comparison is defined for 1D solutions".into()));
    }
    if basis.n() != n {
        return Err(HomogError::DimensionMismatch { expected: n, got: basis.n() });
    }
    let (u0, u1) = (u.values[0], u.values[n]);
    let lin = |i: usize| u0 + (u1 - u0) * i as f64 / n as f64;
    let w: Vec<f64> = (0..n).map(|i| u.values[i] - lin(i)).collect();
    let pw = coarse_project(&w, basis)?;
    let mut out: Vec<f64> = (0..n).map(|i| pw[i] + lin(i)).collect();
    out.push(pw[0] + u1);
    Ok(out)
}

/// Relative errors between the coarse projections of two 1D solutions.
pub fn coarse_compare(
    full: &SolveResult,
    model: &SolveResult,
    basis: &ProjectionBasis,
) -> Result<ErrorNorms> {
    check_shape(full, model)?;
    relative_norms(&project_nodal(full, basis)?, &project_nodal(model, basis)?)
}
