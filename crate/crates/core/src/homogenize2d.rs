//! Fine-mode elimination for 2D scalar coefficients, producing a tensor.
//!
//! The 2D Fourier modes are split into four subspaces by the per-axis
//! partitions: `PP` (coarse in both), `QP` (fine in x), `PQ` (fine in y) and
//! `QQ`. Projecting `diag(a)` onto `(PP | QP, PQ, QQ)` gives the blocks
//!
//! ```text
//! [ D  C ]
//! [ B  A ]
//! ```
//!
//! With `𝒦_x, 𝒦_y` the fine derivative diagonals, `M = 𝒦_x A 𝒦_x + 𝒦_y A 𝒦_y`,
//! and the effective tensor components are the normalized diagonals of
//!
//! ```text
//! Ā_xx ~ D - C 𝒦_x M⁻¹ 𝒦_x B      Ā_xy ~ -C 𝒦_x M⁻¹ 𝒦_y B
//! Ā_yx ~ -C 𝒦_y M⁻¹ 𝒦_x B         Ā_yy ~ D - C 𝒦_y M⁻¹ 𝒦_y B
//! ```
//!
//! sandwiched by `P_x* P_y* (.) P_x P_y`. Since `𝒦 = i κ` with `κ = 2πk` real,
//! `𝒦_x M⁻¹ 𝒦_y = κ_x G⁻¹ κ_y` with `G = κ_x A κ_x + κ_y A κ_y`, which is
//! Hermitian positive-definite when `a > 0` (no fine mode has `k = 0`).

use std::f64::consts::PI;

use faer::{c64, Mat};
use num_complex::Complex64;

use crate::coefficients::CoefficientField;
use crate::error::{HomogError, Result};
use crate::grid::GridSpec;
use crate::linalg::solve_hpd;
use crate::spectral_ops::{
    coarse_project_2d, coefficient_spectrum_2d, derivative_symbol, fft_index, max_imag,
    Fourier2d, ProjectionBasis,
};

/// Default cap on the dimension of the dense fine block.
pub const DEFAULT_QQ_CAP: usize = 6000;

/// Subspace labels in block order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subspace {
    PP,
    QP,
    PQ,
    QQ,
}

/// A 2D Fourier mode `(k_x, k_y)`.
pub type Mode = (i64, i64);

/// Per-axis partitions and the resulting 2D subspace bookkeeping.
#[derive(Clone, Debug)]
pub struct Basis2D {
    grid: GridSpec,
    x: ProjectionBasis,
    y: ProjectionBasis,
    coarse: Vec<Mode>,
    fine: Vec<Mode>,
    dims: [usize; 4],
}

fn modes(ys: &[i64], xs: &[i64]) -> Vec<Mode> {
    ys.iter().flat_map(|&ky| xs.iter().map(move |&kx| (kx, ky))).collect()
}

impl Basis2D {
    pub fn new(grid: GridSpec, cutoff_x: usize, cutoff_y: usize) -> Result<Self> {
        if !grid.is_2d() {
            return Err(HomogError::InvalidGrid("Basis2D needs a 2D grid".into()));
        }
        Self::from_axes(
            grid,
            ProjectionBasis::new(grid.nx(), cutoff_x)?,
            ProjectionBasis::new(grid.ny(), cutoff_y)?,
        )
    }

    pub fn from_axes(grid: GridSpec, x: ProjectionBasis, y: ProjectionBasis) -> Result<Self> {
        if x.n() != grid.nx() || y.n() != grid.ny() {
            return Err(HomogError::DimensionMismatch {
                expected: grid.len(),
                got: x.n() * y.n(),
            });
        }
        let (xc, xf) = (x.coarse_wavenumbers(), x.fine_wavenumbers());
        let (yc, yf) = (y.coarse_wavenumbers(), y.fine_wavenumbers());
        let coarse = modes(yc, xc);
        let qp = modes(yc, xf);
        let pq = modes(yf, xc);
        let qq = modes(yf, xf);
        let dims = [coarse.len(), qp.len(), pq.len(), qq.len()];
        let fine = qp.into_iter().chain(pq).chain(qq).collect();
        Ok(Self {
            grid,
            x,
            y,
            coarse,
            fine,
            dims,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn x(&self) -> &ProjectionBasis {
        &self.x
    }

    pub fn y(&self) -> &ProjectionBasis {
        &self.y
    }

    /// Modes of the `PP` subspace.
    pub fn coarse_modes(&self) -> &[Mode] {
        &self.coarse
    }

    /// Modes of `QP`, `PQ`, `QQ`, concatenated in that order.
    pub fn fine_modes(&self) -> &[Mode] {
        &self.fine
    }

    /// Dimensions of `PP, QP, PQ, QQ`.
    pub fn subspace_dims(&self) -> [usize; 4] {
        self.dims
    }

    pub fn subspace_of(&self, m: Mode) -> Subspace {
        match (self.x.is_coarse(m.0), self.y.is_coarse(m.1)) {
            (true, true) => Subspace::PP,
            (false, true) => Subspace::QP,
            (true, false) => Subspace::PQ,
            (false, false) => Subspace::QQ,
        }
    }

    /// Diagonals `K_x^P, 𝒦_x, K_y^P, 𝒦_y`.
    pub fn derivative_blocks(&self) -> [Vec<Complex64>; 4] {
        let dx = |ms: &[Mode]| ms.iter().map(|m| derivative_symbol(m.0)).collect();
        let dy = |ms: &[Mode]| ms.iter().map(|m| derivative_symbol(m.1)).collect();
        [dx(&self.coarse), dx(&self.fine), dy(&self.coarse), dy(&self.fine)]
    }

    /// `N / (k_p,x k_p,y)`
    pub fn normalization(&self) -> f64 {
        self.grid.len() as f64 / self.coarse.len() as f64
    }
}

/// Dense blocks of `diag(a)` between the coarse and fine subspaces.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub d: Mat<c64>,
    pub c: Mat<c64>,
    pub b: Mat<c64>,
    pub a: Mat<c64>,
}

struct Spectrum2 {
    nx: usize,
    ny: usize,
    values: Vec<Complex64>,
}

impl Spectrum2 {
    fn new(a: &CoefficientField) -> Self {
        Self {
            nx: a.grid().nx(),
            ny: a.grid().ny(),
            values: coefficient_spectrum_2d(a.values(), a.grid()),
        }
    }

    /// `â(p - q)`
    #[inline]
    fn at(&self, p: Mode, q: Mode) -> c64 {
        self.values[fft_index(p.1 - q.1, self.ny) * self.nx + fft_index(p.0 - q.0, self.nx)]
    }
}

fn check_inputs(a: &CoefficientField, basis: &Basis2D) -> Result<()> {
    if a.grid() != basis.grid() {
        return Err(HomogError::DimensionMismatch {
            expected: basis.grid().len(),
            got: a.grid().len(),
        });
    }
    Ok(())
}

fn check_cap(basis: &Basis2D, cap: usize) -> Result<()> {
    let dim = basis.fine_modes().len();
    if dim > cap {
        return Err(HomogError::TooLarge { dim, cap });
    }
    Ok(())
}

/// Projects `diag(a)` onto the labelled subspaces, returning `D, C, B, A`.
pub fn decompose_blocks(
    a: &CoefficientField,
    basis: &Basis2D,
    qq_cap: usize,
) -> Result<BlockDecomposition> {
    check_inputs(a, basis)?;
    check_cap(basis, qq_cap)?;
    let spec = Spectrum2::new(a);
    let (pp, ff) = (basis.coarse_modes(), basis.fine_modes());
    let block = |rows: &[Mode], cols: &[Mode]| {
        Mat::<c64>::from_fn(rows.len(), cols.len(), |i, j| spec.at(rows[i], cols[j]))
    };
    Ok(BlockDecomposition {
        d: block(pp, pp),
        c: block(pp, ff),
        b: block(ff, pp),
        a: block(ff, ff),
    })
}

impl BlockDecomposition {
    /// Conjugates the full block matrix back to real space:
    /// `F* [[D, C], [B, A]] F`, which should equal `diag(a)`.
    pub fn reassemble(&self, basis: &Basis2D) -> Mat<c64> {
        let grid = basis.grid();
        let n = grid.len();
        let all: Vec<Mode> = basis.coarse_modes().iter().chain(basis.fine_modes()).copied().collect();
        let kp = basis.coarse_modes().len();
        let scale = 1.0 / (n as f64).sqrt();
        // F* : n × n, column m holds exp(+2πi k_m · x) / sqrt(n).
        let f_adj = Mat::<c64>::from_fn(n, n, |r, m| {
            let (i, j) = (r % grid.nx(), r / grid.nx());
            let (kx, ky) = all[m];
            let phase = 2.0 * PI * (kx as f64 * i as f64 / grid.nx() as f64 + ky as f64 * j as f64 / grid.ny() as f64);
            c64::from_polar(scale, phase)
        });
        let full = Mat::<c64>::from_fn(n, n, |r, c| match (r < kp, c < kp) {
            (true, true) => self.d[(r, c)],
            (true, false) => self.c[(r, c - kp)],
            (false, true) => self.b[(r - kp, c)],
            (false, false) => self.a[(r - kp, c - kp)],
        });
        &f_adj * &full * f_adj.adjoint()
    }
}

/// Which component of the 2x2 tensor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Component {
    XX,
    XY,
    YX,
    YY,
}

impl Component {
    pub const ALL: [Component; 4] = [Component::XX, Component::XY, Component::YX, Component::YY];

    pub fn name(&self) -> &'static str {
        match self {
            Component::XX => "a_xx",
            Component::XY => "a_xy",
            Component::YX => "a_yx",
            Component::YY => "a_yy",
        }
    }
}

/// Solve diagnostics attached to a tensor coefficient.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TensorDiagnostics {
    pub imag_residual: f64,
    pub solve_residual: f64,
    pub condition_estimate: f64,
    /// The fine block was factored per `k_y` (y-invariant coefficient).
    pub block_sparse: bool,
}

/// Effective tensor coefficient `[[Ā_xx, Ā_xy], [Ā_yx, Ā_yy]]` on the grid.
#[derive(Clone, Debug)]
pub struct TensorCoefficient2D {
    grid: GridSpec,
    xx: Vec<f64>,
    xy: Vec<f64>,
    yx: Vec<f64>,
    yy: Vec<f64>,
    normalization: f64,
    diagnostics: TensorDiagnostics,
}

impl TensorCoefficient2D {
    pub fn new(
        grid: GridSpec,
        [xx, xy, yx, yy]: [Vec<f64>; 4],
        normalization: f64,
        diagnostics: TensorDiagnostics,
    ) -> Result<Self> {
        for v in [&xx, &xy, &yx, &yy] {
            grid.check_len(v.len())?;
        }
        Ok(Self {
            grid,
            xx,
            xy,
            yx,
            yy,
            normalization,
            diagnostics,
        })
    }

    /// `a I`, the tensor form of a scalar coefficient.
    pub fn isotropic(a: &CoefficientField) -> Self {
        let n = a.values().len();
        Self {
            grid: *a.grid(),
            xx: a.values().to_vec(),
            xy: vec![0.0; n],
            yx: vec![0.0; n],
            yy: a.values().to_vec(),
            normalization: 1.0,
            diagnostics: TensorDiagnostics::default(),
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn component(&self, c: Component) -> &[f64] {
        match c {
            Component::XX => &self.xx,
            Component::XY => &self.xy,
            Component::YX => &self.yx,
            Component::YY => &self.yy,
        }
    }

    pub fn xx(&self) -> &[f64] {
        &self.xx
    }

    pub fn xy(&self) -> &[f64] {
        &self.xy
    }

    pub fn yx(&self) -> &[f64] {
        &self.yx
    }

    pub fn yy(&self) -> &[f64] {
        &self.yy
    }

    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn diagnostics(&self) -> &TensorDiagnostics {
        &self.diagnostics
    }

    /// Number of samples where the symmetric part of the tensor is not
    /// positive definite.
    pub fn indefinite_count(&self) -> usize {
        (0..self.xx.len())
            .filter(|&i| {
                let off = 0.5 * (self.xy[i] + self.yx[i]);
                !(self.xx[i] > 0.0 && self.yy[i] > 0.0 && self.xx[i] * self.yy[i] - off * off > 0.0)
            })
            .count()
    }

    pub fn min_diagonal(&self) -> f64 {
        self.xx.iter().chain(&self.yy).copied().fold(f64::INFINITY, f64::min)
    }
}

/// Real field `(N / k_p) diag(P* S P)`, computed by summing `S` along its
/// wavenumber-difference diagonals and inverting once.
fn sandwich_diagonal(s: &Mat<c64>, basis: &Basis2D) -> (Vec<f64>, f64) {
    let grid = basis.grid();
    let (nx, ny) = (grid.nx(), grid.ny());
    let pp = basis.coarse_modes();
    let mut acc = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (j, q) in pp.iter().enumerate() {
        for (i, p) in pp.iter().enumerate() {
            acc[fft_index(p.1 - q.1, ny) * nx + fft_index(p.0 - q.0, nx)] += s[(i, j)];
        }
    }
    Fourier2d::new(grid).inverse_raw(&mut acc);
    let inv_kp = 1.0 / pp.len() as f64;
    let residual = max_imag(&acc) * inv_kp;
    (acc.into_iter().map(|c| c.re * inv_kp).collect(), residual)
}

struct SchurBlocks {
    sxx: Mat<c64>,
    sxy: Mat<c64>,
    syx: Mat<c64>,
    syy: Mat<c64>,
    residual: f64,
    condition: f64,
}

/// `D - R_x* X_x`, `-R_x* X_y`, `-R_y* X_x`, `D - R_y* X_y` with
/// `R = [κ_x B | κ_y B]` and `X = G⁻¹ R`.
fn schur_from_solve(
    d: &Mat<c64>,
    g: &Mat<c64>,
    rhs: &Mat<c64>,
    min_coefficient: f64,
) -> Result<SchurBlocks> {
    let kp = d.nrows();
    let sol = solve_hpd(g, rhs, min_coefficient)?;
    let (rx, ry) = (rhs.subcols(0, kp), rhs.subcols(kp, kp));
    let (xx, xy) = (sol.x.subcols(0, kp), sol.x.subcols(kp, kp));
    Ok(SchurBlocks {
        sxx: d - rx.adjoint() * xx,
        sxy: -(rx.adjoint() * xy),
        syx: -(ry.adjoint() * xx),
        syy: d - ry.adjoint() * xy,
        residual: sol.relative_residual,
        condition: sol.condition_estimate,
    })
}

fn dense_schur(
    a: &CoefficientField,
    basis: &Basis2D,
    spec: &Spectrum2,
    qq_cap: usize,
) -> Result<SchurBlocks> {
    check_cap(basis, qq_cap)?;
    let (pp, ff) = (basis.coarse_modes(), basis.fine_modes());
    let kp = pp.len();
    let kappa = |k: i64| 2.0 * PI * k as f64;
    let d = Mat::<c64>::from_fn(kp, kp, |i, j| spec.at(pp[i], pp[j]));
    let rhs = Mat::<c64>::from_fn(ff.len(), 2 * kp, |i, j| {
        let f = ff[i];
        if j < kp {
            spec.at(f, pp[j]) * kappa(f.0)
        } else {
            spec.at(f, pp[j - kp]) * kappa(f.1)
        }
    });
    let g = Mat::<c64>::from_fn(ff.len(), ff.len(), |i, j| {
        let (p, q) = (ff[i], ff[j]);
        spec.at(p, q) * (kappa(p.0) * kappa(q.0) + kappa(p.1) * kappa(q.1))
    });
    schur_from_solve(&d, &g, &rhs, a.min())
}

/// Same elimination for a coefficient that does not depend on `y`: every block
/// couples only equal `k_y`, so the fine system splits into one small solve
/// per coarse `k_y`.
fn block_sparse_schur(a: &CoefficientField, basis: &Basis2D, spec: &Spectrum2) -> Result<SchurBlocks> {
    let pp = basis.coarse_modes();
    let kp = pp.len();
    let (xc, xf) = (basis.x().coarse_wavenumbers(), basis.x().fine_wavenumbers());
    let kappa = |k: i64| 2.0 * PI * k as f64;
    let mut out = SchurBlocks {
        sxx: Mat::zeros(kp, kp),
        sxy: Mat::zeros(kp, kp),
        syx: Mat::zeros(kp, kp),
        syy: Mat::zeros(kp, kp),
        residual: 0.0,
        condition: 1.0,
    };
    for (row, &ky) in basis.y().coarse_wavenumbers().iter().enumerate() {
        let offset = row * xc.len();
        let m = |kx: i64| (kx, ky);
        let d = Mat::<c64>::from_fn(xc.len(), xc.len(), |i, j| spec.at(m(xc[i]), m(xc[j])));
        let rhs = Mat::<c64>::from_fn(xf.len(), 2 * xc.len(), |i, j| {
            if j < xc.len() {
                spec.at(m(xf[i]), m(xc[j])) * kappa(xf[i])
            } else {
                spec.at(m(xf[i]), m(xc[j - xc.len()])) * kappa(ky)
            }
        });
        let g = Mat::<c64>::from_fn(xf.len(), xf.len(), |i, j| {
            spec.at(m(xf[i]), m(xf[j])) * (kappa(xf[i]) * kappa(xf[j]) + kappa(ky) * kappa(ky))
        });
        let blk = schur_from_solve(&d, &g, &rhs, a.min())?;
        for i in 0..xc.len() {
            for j in 0..xc.len() {
                out.sxx[(offset + i, offset + j)] = blk.sxx[(i, j)];
                out.sxy[(offset + i, offset + j)] = blk.sxy[(i, j)];
                out.syx[(offset + i, offset + j)] = blk.syx[(i, j)];
                out.syy[(offset + i, offset + j)] = blk.syy[(i, j)];
            }
        }
        out.residual = out.residual.max(blk.residual);
        out.condition = out.condition.max(blk.condition);
    }
    Ok(out)
}

fn is_y_invariant(a: &CoefficientField) -> bool {
    let nx = a.grid().nx();
    let first = &a.values()[..nx];
    a.values().chunks_exact(nx).all(|row| row == first)
}

/// Homogenized tensor with the default fine-block cap.
pub fn homogenize_2d(a: &CoefficientField, basis: &Basis2D) -> Result<TensorCoefficient2D> {
    homogenize_2d_with_cap(a, basis, DEFAULT_QQ_CAP)
}

/// Homogenized tensor; fails with a size error if the dense fine block would
/// exceed `qq_cap` rows. y-invariant coefficients use the per-`k_y` path and
/// are not subject to the cap.
pub fn homogenize_2d_with_cap(
    a: &CoefficientField,
    basis: &Basis2D,
    qq_cap: usize,
) -> Result<TensorCoefficient2D> {
    check_inputs(a, basis)?;
    let spec = Spectrum2::new(a);
    let block_sparse = is_y_invariant(a);
    let s = if block_sparse {
        block_sparse_schur(a, basis, &spec)?
    } else {
        dense_schur(a, basis, &spec, qq_cap)?
    };
    let mut imag = 0.0_f64;
    let mut field = |m: &Mat<c64>| {
        let (v, r) = sandwich_diagonal(m, basis);
        imag = imag.max(r);
        v
    };
    let comps = [field(&s.sxx), field(&s.sxy), field(&s.syx), field(&s.syy)];
    TensorCoefficient2D::new(
        *basis.grid(),
        comps,
        basis.normalization(),
        TensorDiagnostics {
            imag_residual: imag,
            solve_residual: s.residual,
            condition_estimate: s.condition,
            block_sparse,
        },
    )
}

/// Low-pass model `Ā_xx = Ā_yy = P_x*P_y* P_x P_y a`, no cross terms.
pub fn raw_filter_2d(a: &CoefficientField, basis: &Basis2D) -> Result<TensorCoefficient2D> {
    check_inputs(a, basis)?;
    let filtered = coarse_project_2d(a.values(), a.grid(), basis.x(), basis.y())?;
    let field = CoefficientField::new(*a.grid(), filtered, a.provenance().clone())?;
    Ok(TensorCoefficient2D::isotropic(&field))
}
