//! Reference and model solvers for the diffusion equation `∇·(a ∇u) = f`.

mod compare;
mod exact1d;
mod fd2d;

pub use compare::{coarse_compare, compare_solutions, CompareMode, ErrorNorms};
pub use exact1d::exact_diffusion_1d;
pub use fd2d::{
    solve_diffusion_2d_fd, solve_fd, BoundaryConditions2D, NodalTensor, DEFAULT_FD_TOLERANCE,
};

/// Nodal solution of a diffusion solve.
///
/// Nodes include both ends of every non-periodic axis: a grid with `nx`
/// periodic samples yields `nx + 1` nodes at `i / nx`, the last one at `x = 1`.
/// Values are row-major with `x` fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveResult {
    pub nodes_x: usize,
    pub nodes_y: usize,
    pub values: Vec<f64>,
    /// Relative residual of the discrete system (or flux-constancy defect in 1D).
    pub residual_norm: f64,
    pub converged: bool,
    pub diagnostics: Vec<String>,
}

impl SolveResult {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nodes_x + i]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `1 - u`, converting between the `u(0)=0, u(1)=1` and `u(0)=1, u(1)=0`
    /// conventions.
    pub fn flipped(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| 1.0 - v).collect(),
            ..self.clone()
        }
    }

    /// Pointwise difference `self - other`.
    pub fn difference(&self, other: &SolveResult) -> Vec<f64> {
        self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect()
    }
}
