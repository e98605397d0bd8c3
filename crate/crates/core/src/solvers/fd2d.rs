use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::error::{HomogError, Result};
use crate::homogenize2d::TensorCoefficient2D;

use super::SolveResult;

pub const DEFAULT_FD_TOLERANCE: f64 = 1e-10;

const MAX_REFINEMENTS: usize = 3;

/// Dirichlet data on `x = 0` and `x = 1`, zero flux through `y = 0` and `y = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryConditions2D {
    pub left: f64,
    pub right: f64,
    pub neumann_top_bottom: bool,
}

impl Default for BoundaryConditions2D {
    fn default() -> Self {
        Self {
            left: 1.0,
            right: 0.0,
            neumann_top_bottom: true,
        }
    }
}

impl BoundaryConditions2D {
    pub fn new(left: f64, right: f64) -> Self {
        Self {
            left,
            right,
            neumann_top_bottom: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.neumann_top_bottom {
            return Err(HomogError::InvalidParameter(
                "only zero-Neumann top/bottom boundaries are supported".into(),
            ));
        }
        if !self.left.is_finite() || !self.right.is_finite() {
            return Err(HomogError::InvalidParameter("Dirichlet values must be finite".into()));
        }
        Ok(())
    }
}

/// Tensor components sampled on the `(nx + 1) x (ny + 1)` node grid.
#[derive(Clone, Debug)]
pub struct NodalTensor {
    nx: usize,
    ny: usize,
    /// `[xx, xy, yx, yy]`, each row-major with `x` fastest.
    comps: [Vec<f64>; 4],
}

impl NodalTensor {
    /// Extends a periodic grid tensor to the node grid by wrapping `i = nx` to
    /// `i = 0` and `j = ny` to `j = 0`.
    pub fn from_periodic(t: &TensorCoefficient2D) -> Self {
        let g = t.grid();
        let (nx, ny) = (g.nx(), g.ny());
        let wrap = |src: &[f64]| {
            let mut out = Vec::with_capacity((nx + 1) * (ny + 1));
            for j in 0..=ny {
                for i in 0..=nx {
                    out.push(src[g.index(i % nx, j % ny)]);
                }
            }
            out
        };
        Self {
            nx,
            ny,
            comps: [wrap(t.xx()), wrap(t.xy()), wrap(t.yx()), wrap(t.yy())],
        }
    }

    /// Samples `f(x, y) -> [xx, xy, yx, yy]` at the nodes `(i / nx, j / ny)`.
    pub fn from_fn(nx: usize, ny: usize, f: impl Fn(f64, f64) -> [f64; 4]) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(HomogError::InvalidGrid(format!("node grid {nx}x{ny} too small")));
        }
        let mut comps: [Vec<f64>; 4] = Default::default();
        for j in 0..=ny {
            for i in 0..=nx {
                let v = f(i as f64 / nx as f64, j as f64 / ny as f64);
                for (c, x) in comps.iter_mut().zip(v) {
                    c.push(x);
                }
            }
        }
        Ok(Self { nx, ny, comps })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    fn get(&self, c: usize, i: usize, j: usize) -> f64 {
        self.comps[c][j * (self.nx + 1) + i]
    }

    fn diagnostics(&self) -> Vec<String> {
        let n = self.comps[0].len();
        let mut nonpositive = 0;
        let mut indefinite = 0;
        for p in 0..n {
            let (xx, yy) = (self.comps[0][p], self.comps[3][p]);
            let off = 0.5 * (self.comps[1][p] + self.comps[2][p]);
            if !(xx > 0.0 && yy > 0.0) {
                nonpositive += 1;
            } else if xx * yy - off * off <= 0.0 {
                indefinite += 1;
            }
        }
        let mut out = Vec::new();
        if nonpositive > 0 {
            out.push(format!("non-positive diagonal at {nonpositive} nodes"));
        }
        if indefinite > 0 {
            out.push(format!("indefinite tensor at {indefinite} nodes"));
        }
        out
    }
}

fn harmonic(a: f64, b: f64) -> f64 {
    2.0 * a * b / (a + b)
}

/// Solves `∇·(A ∇u) = f` on the unit square.
///
/// Unknowns live on interior columns `i = 1..nx-1` and all rows `j = 0..=ny`.
/// Diagonal terms use face coefficients from the harmonic average of the
/// neighbouring nodes. Mixed terms use centered cross differences:
///
/// ```text
/// ∂x(A_xy ∂y u) ≈ [A_xy(i+1,j)(u(i+1,j+1) - u(i+1,j-1)) - A_xy(i-1,j)(u(i-1,j+1) - u(i-1,j-1))] / (4 hx hy)
/// ∂y(A_yx ∂x u) ≈ [A_yx(i,j+1)(u(i+1,j+1) - u(i-1,j+1)) - A_yx(i,j-1)(u(i+1,j-1) - u(i-1,j-1))] / (4 hx hy)
/// ```
///
/// Rows `j = -1` and `j = ny + 1` are ghosts mirrored onto `j = 1` and
/// `j = ny - 1` (both `u` and `A`), which imposes zero normal derivative.
/// `source` holds `f` on the node grid; `None` means `f = 0`.
pub fn solve_fd(
    tensor: &NodalTensor,
    bc: &BoundaryConditions2D,
    source: Option<&[f64]>,
    tol: f64,
) -> Result<SolveResult> {
    bc.validate()?;
    if !(tol > 0.0) {
        return Err(HomogError::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }
    let (nx, ny) = (tensor.nx, tensor.ny);
    let nodes = (nx + 1) * (ny + 1);
    if let Some(f) = source {
        if f.len() != nodes {
            return Err(HomogError::DimensionMismatch {
                expected: nodes,
                got: f.len(),
            });
        }
    }
    let hx = 1.0 / nx as f64;
    let hy = 1.0 / ny as f64;
    let cols = nx - 1;
    let unknowns = cols * (ny + 1);
    let mirror = |j: isize| -> usize {
        if j < 0 {
            (-j) as usize
        } else if j as usize > ny {
            2 * ny - j as usize
        } else {
            j as usize
        }
    };

    let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(unknowns);
    let mut rhs = vec![0.0; unknowns];
    for j in 0..=ny {
        for i in 1..nx {
            let r = j * cols + (i - 1);
            let mut row: Vec<(usize, f64)> = Vec::with_capacity(13);
            let mut b = source.map_or(0.0, |f| f[j * (nx + 1) + i]);
            let mut add = |ii: usize, jj: usize, w: f64, row: &mut Vec<(usize, f64)>| {
                if ii == 0 {
                    b -= w * bc.left;
                } else if ii == nx {
                    b -= w * bc.right;
                } else {
                    row.push((jj * cols + ii - 1, w));
                }
            };
            let a = |c: usize, ii: usize, jj: isize| tensor.get(c, ii, mirror(jj));
            let ji = j as isize;

            let ae = harmonic(a(0, i, ji), a(0, i + 1, ji)) / (hx * hx);
            let aw = harmonic(a(0, i, ji), a(0, i - 1, ji)) / (hx * hx);
            let an = harmonic(a(3, i, ji), a(3, i, ji + 1)) / (hy * hy);
            let as_ = harmonic(a(3, i, ji), a(3, i, ji - 1)) / (hy * hy);
            add(i + 1, j, ae, &mut row);
            add(i - 1, j, aw, &mut row);
            add(i, mirror(ji + 1), an, &mut row);
            add(i, mirror(ji - 1), as_, &mut row);
            add(i, j, -(ae + aw + an + as_), &mut row);

            let s = 1.0 / (4.0 * hx * hy);
            let xe = a(1, i + 1, ji) * s;
            let xw = a(1, i - 1, ji) * s;
            add(i + 1, mirror(ji + 1), xe, &mut row);
            add(i + 1, mirror(ji - 1), -xe, &mut row);
            add(i - 1, mirror(ji + 1), -xw, &mut row);
            add(i - 1, mirror(ji - 1), xw, &mut row);
            let yn = a(2, i, ji + 1) * s;
            let ys = a(2, i, ji - 1) * s;
            add(i + 1, mirror(ji + 1), yn, &mut row);
            add(i - 1, mirror(ji + 1), -yn, &mut row);
            add(i + 1, mirror(ji - 1), -ys, &mut row);
            add(i - 1, mirror(ji - 1), ys, &mut row);

            row.sort_unstable_by_key(|e| e.0);
            row.dedup_by(|later, kept| {
                if later.0 == kept.0 {
                    kept.1 += later.1;
                    true
                } else {
                    false
                }
            });
            rhs[r] = b;
            rows.push(row);
        }
    }

    let triplets: Vec<Triplet<usize, usize, f64>> = rows
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.iter().map(move |&(c, v)| Triplet::new(r, c, v)))
        .collect();
    let matrix = SparseColMat::<usize, f64>::try_new_from_triplets(unknowns, unknowns, &triplets)
        .map_err(|e| HomogError::Solver(format!("sparse assembly failed: {e:?}")))?;
    let lu = matrix
        .sp_lu()
        .map_err(|e| HomogError::Solver(format!("sparse LU failed: {e:?}")))?;

    let residual = |x: &[f64]| -> Vec<f64> {
        rows.iter()
            .zip(&rhs)
            .map(|(row, b)| b - row.iter().map(|&(c, v)| v * x[c]).sum::<f64>())
            .collect()
    };
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let b_norm = norm(&rhs);
    let scale = if b_norm > 0.0 { b_norm } else { 1.0 };

    let mut x = vec![0.0; unknowns];
    let mut r = rhs.clone();
    let mut rel = norm(&r) / scale;
    for _ in 0..=MAX_REFINEMENTS {
        if rel <= tol && x.iter().any(|v| *v != 0.0) {
            break;
        }
        let dx = lu.solve(Mat::<f64>::from_fn(unknowns, 1, |k, _| r[k]));
        x.iter_mut().enumerate().for_each(|(k, v)| *v += dx[(k, 0)]);
        r = residual(&x);
        rel = norm(&r) / scale;
    }

    let mut values = vec![0.0; nodes];
    for j in 0..=ny {
        values[j * (nx + 1)] = bc.left;
        values[j * (nx + 1) + nx] = bc.right;
        for i in 1..nx {
            values[j * (nx + 1) + i] = x[j * cols + i - 1];
        }
    }
    let converged = rel.is_finite() && rel <= tol;
    let mut diagnostics = tensor.diagnostics();
    if !converged {
        diagnostics.push(format!("relative residual {rel:e} above tolerance {tol:e}"));
    }
    Ok(SolveResult {
        nodes_x: nx + 1,
        nodes_y: ny + 1,
        values,
        residual_norm: rel,
        converged,
        diagnostics,
    })
}

/// `∇·(Ā ∇u) = 0` with the periodic tensor extended to the node grid.
pub fn solve_diffusion_2d_fd(
    coeff: &TensorCoefficient2D,
    bc: &BoundaryConditions2D,
    tol: f64,
) -> Result<SolveResult> {
    if !coeff.grid().is_2d() {
        return Err(HomogError::InvalidGrid("solve_diffusion_2d_fd expects a 2D tensor".into()));
    }
    solve_fd(&NodalTensor::from_periodic(coeff), bc, None, tol)
}
