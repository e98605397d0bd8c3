//! Fine-mode elimination for 1D coefficients.
//!
//! In the unitary Fourier basis the multiplication operator `diag(a)` becomes
//! the matrix `â(k - k')`. Eliminating the fine modes leaves the coarse Schur
//! complement
//!
//! ```text
//! S = P a P* - P a Q* (Q a Q*)^-1 Q a P*
//! ```
//!
//! and the real-space kernel `K = P* S P`, which equals
//! `P*P [a - a Q*(Q a Q*)^-1 Q a] P*P`. The homogenized coefficient is the
//! diagonal of `K`, rescaled by `n / k_p` so that constants are fixed points.

use std::f64::consts::PI;

use faer::{c64, Mat};

use crate::coefficients::{CoefficientField, Provenance};
use crate::error::{HomogError, Result};
use crate::grid::GridSpec;
use crate::linalg::solve_hpd;
use crate::spectral_ops::{coarse_project, coefficient_spectrum_1d, fft_index, ProjectionBasis};

/// Dense real-space coarse-band operator `Ā(x, x')`.
#[derive(Clone, Debug)]
pub struct HomogenizedKernel {
    grid: GridSpec,
    basis: ProjectionBasis,
    matrix: Mat<f64>,
    imag_residual: f64,
    hermitian_residual: f64,
    solve_residual: f64,
    condition_estimate: f64,
}

impl HomogenizedKernel {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn basis(&self) -> &ProjectionBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &Mat<f64> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    /// Largest imaginary part discarded when taking the real kernel.
    pub fn imag_residual(&self) -> f64 {
        self.imag_residual
    }

    /// `max |K - K^T|` of the complex kernel, before the real part was taken.
    pub fn hermitian_residual(&self) -> f64 {
        self.hermitian_residual
    }

    /// Relative residual of the corrector solve.
    pub fn solve_residual(&self) -> f64 {
        self.solve_residual
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    /// Rows of the kernel, for export.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| self.matrix[(i, j)]).collect())
            .collect()
    }

    /// Builds a kernel from an explicit matrix, with no solve diagnostics.
    pub fn from_matrix(grid: GridSpec, basis: ProjectionBasis, matrix: Mat<f64>) -> Result<Self> {
        grid.check_len(matrix.nrows())?;
        grid.check_len(matrix.ncols())?;
        Ok(Self {
            grid,
            basis,
            matrix,
            imag_residual: 0.0,
            hermitian_residual: 0.0,
            solve_residual: 0.0,
            condition_estimate: 1.0,
        })
    }
}

/// Homogenized scalar coefficient `ā(x)`.
#[derive(Clone, Debug)]
pub struct HomogenizedCoefficient1D {
    grid: GridSpec,
    basis: ProjectionBasis,
    values: Vec<f64>,
    normalization: f64,
    imag_residual: f64,
}

impl HomogenizedCoefficient1D {
    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn basis(&self) -> &ProjectionBasis {
        &self.basis
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Factor `n / k_p` applied to the kernel diagonal.
    pub fn normalization(&self) -> f64 {
        self.normalization
    }

    pub fn imag_residual(&self) -> f64 {
        self.imag_residual
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive(&self) -> bool {
        self.min_value() > 0.0
    }

    /// Converts to a coefficient field; fails if `ā` is not positive everywhere.
    pub fn to_field(&self) -> Result<CoefficientField> {
        let mut prov = Provenance::new("homogenized");
        if let Some(c) = self.basis.cutoff() {
            prov = prov.param("cutoff", c);
        }
        prov = prov.param("normalization", self.normalization);
        CoefficientField::new(self.grid, self.values.clone(), prov)
    }
}

fn check_basis(a: &CoefficientField, basis: &ProjectionBasis) -> Result<()> {
    if a.grid().is_2d() {
        return Err(HomogError::InvalidGrid("expected a 1D coefficient".into()));
    }
    if basis.n() != a.grid().nx() {
        return Err(HomogError::DimensionMismatch {
            expected: a.grid().nx(),
            got: basis.n(),
        });
    }
    Ok(())
}

/// Coarse Schur complement `S` (k_p × k_p) and solve diagnostics.
pub(crate) struct Schur {
    pub s: Mat<c64>,
    pub residual: f64,
    pub condition: f64,
}

fn schur_1d(a: &CoefficientField, basis: &ProjectionBasis) -> Result<Schur> {
    let n = basis.n();
    let spec = coefficient_spectrum_1d(a.values());
    let ahat = |k: i64, kp: i64| spec[fft_index(k - kp, n)];
    let coarse = basis.coarse_wavenumbers();
    let fine = basis.fine_wavenumbers();

    let d = Mat::<c64>::from_fn(coarse.len(), coarse.len(), |i, j| ahat(coarse[i], coarse[j]));
    if fine.is_empty() {
        return Ok(Schur {
            s: d,
            residual: 0.0,
            condition: 1.0,
        });
    }
    let b = Mat::<c64>::from_fn(fine.len(), coarse.len(), |i, j| ahat(fine[i], coarse[j]));
    let fine_block = Mat::<c64>::from_fn(fine.len(), fine.len(), |i, j| ahat(fine[i], fine[j]));
    let sol = solve_hpd(&fine_block, &b, a.min())?;
    // C = B* exactly because the spectrum is conjugate-symmetric.
    let s = &d - b.adjoint() * &sol.x;
    Ok(Schur {
        s,
        residual: sol.relative_residual,
        condition: sol.condition_estimate,
    })
}

/// `P*P [a - a Q*(Q a Q*)^-1 Q a] P*P` as a dense real matrix.
pub fn homogenize_kernel_1d(
    a: &CoefficientField,
    basis: &ProjectionBasis,
) -> Result<HomogenizedKernel> {
    check_basis(a, basis)?;
    let n = basis.n();
    let schur = schur_1d(a, basis)?;
    let coarse = basis.coarse_wavenumbers();
    let scale = 1.0 / (n as f64).sqrt();
    // P* as an n × k_p matrix.
    let p_adj = Mat::<c64>::from_fn(n, coarse.len(), |x, i| {
        let phase = 2.0 * PI * (coarse[i] * x as i64).rem_euclid(n as i64) as f64 / n as f64;
        c64::from_polar(scale, phase)
    });
    let kernel = &p_adj * &schur.s * p_adj.adjoint();

    let mut imag_residual = 0.0_f64;
    let mut hermitian_residual = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let z = kernel[(i, j)];
            imag_residual = imag_residual.max(z.im.abs());
            hermitian_residual = hermitian_residual.max((z - kernel[(j, i)].conj()).norm());
        }
    }
    let matrix = Mat::<f64>::from_fn(n, n, |i, j| kernel[(i, j)].re);
    Ok(HomogenizedKernel {
        grid: *a.grid(),
        basis: basis.clone(),
        matrix,
        imag_residual,
        hermitian_residual,
        solve_residual: schur.residual,
        condition_estimate: schur.condition,
    })
}

/// `ā(x) = (n / k_p) K(x, x)`.
pub fn extract_diagonal(kernel: &HomogenizedKernel) -> HomogenizedCoefficient1D {
    let n = kernel.n();
    let normalization = n as f64 / kernel.basis.coarse_count() as f64;
    let values = (0..n).map(|i| normalization * kernel.matrix[(i, i)]).collect();
    HomogenizedCoefficient1D {
        grid: kernel.grid,
        basis: kernel.basis.clone(),
        values,
        normalization,
        imag_residual: kernel.imag_residual,
    }
}

/// Kernel construction followed by diagonal extraction.
pub fn homogenize_1d(
    a: &CoefficientField,
    basis: &ProjectionBasis,
) -> Result<HomogenizedCoefficient1D> {
    Ok(extract_diagonal(&homogenize_kernel_1d(a, basis)?))
}

/// Low-pass filtered coefficient `P*P a` with no corrector.
pub fn raw_filter_1d(a: &CoefficientField, basis: &ProjectionBasis) -> Result<CoefficientField> {
    check_basis(a, basis)?;
    let values = coarse_project(a.values(), basis)?;
    let mut prov = a.provenance().clone().param("filter", "raw");
    if let Some(c) = basis.cutoff() {
        prov = prov.param("cutoff", c);
    }
    CoefficientField::new(*a.grid(), values, prov)
}

/// `‖K - diag(K)‖_F / ‖K‖_F`.
pub fn offdiag_mass(kernel: &HomogenizedKernel) -> Result<f64> {
    let total = kernel.matrix.norm_l2();
    if total == 0.0 {
        return Err(HomogError::UndefinedRatio("kernel is identically zero".into()));
    }
    let n = kernel.n();
    let off: f64 = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| kernel.matrix[(i, j)].powi(2))
        .sum();
    Ok(off.sqrt() / total)
}

/// The projector `P*P` assembled as a dense real matrix: the Dirichlet kernel
/// `(1/n) Σ_{k ∈ coarse} cos(2π k (x - x') / n)`.
pub fn coarse_projector_matrix(basis: &ProjectionBasis) -> Mat<f64> {
    let n = basis.n();
    Mat::<f64>::from_fn(n, n, |i, j| {
        basis
            .coarse_wavenumbers()
            .iter()
            .map(|&k| (2.0 * PI * (k * (i as i64 - j as i64)) as f64 / n as f64).cos())
            .sum::<f64>()
            / n as f64
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{gen_filtered_random, gen_periodic};

    fn grid(n: usize) -> GridSpec {
        GridSpec::new_1d(n).unwrap()
    }

    #[test]
    fn constant_kernel_is_scaled_projector() {
        let g = grid(32);
        let basis = ProjectionBasis::new(32, 4).unwrap();
        let a = CoefficientField::constant(g, 3.0).unwrap();
        let k = homogenize_kernel_1d(&a, &basis).unwrap();
        let p = coarse_projector_matrix(&basis);
        for i in 0..32 {
            for j in 0..32 {
                assert!((k.entry(i, j) - 3.0 * p[(i, j)]).abs() < 1e-12);
            }
        }
        let abar = extract_diagonal(&k);
        assert!(abar.values().iter().all(|v| (v - 3.0).abs() < 1e-10));
        assert!((abar.normalization() - 32.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn full_retention_is_identity() {
        let g = grid(64);
        let a = gen_filtered_random(g, 1, 0.1).unwrap();
        let basis = ProjectionBasis::full_retention(64).unwrap();
        let k = homogenize_kernel_1d(&a, &basis).unwrap();
        for i in 0..64 {
            for j in 0..64 {
                let expect = if i == j { a.values()[i] } else { 0.0 };
                assert!((k.entry(i, j) - expect).abs() < 1e-12);
            }
        }
        let abar = extract_diagonal(&k);
        for (x, y) in abar.values().iter().zip(a.values()) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn harmonic_mean_at_dc_only() {
        let a = gen_periodic(grid(128), 1.0, 4.0, 8).unwrap();
        let basis = ProjectionBasis::new(128, 0).unwrap();
        let abar = homogenize_1d(&a, &basis).unwrap();
        assert!(abar.values().iter().all(|v| ((v - 1.6) / 1.6).abs() < 1e-3));
        let raw = raw_filter_1d(&a, &basis).unwrap();
        assert!(raw.values().iter().all(|v| (v - 2.5).abs() < 1e-12));
    }

    #[test]
    fn kernel_is_symmetric_with_coarse_rank() {
        let a = gen_filtered_random(grid(64), 3, 0.1).unwrap();
        let basis = ProjectionBasis::new(64, 10).unwrap();
        let k = homogenize_kernel_1d(&a, &basis).unwrap();
        let scale = k.matrix().norm_max();
        assert!(k.hermitian_residual() <= 1e-10 * scale);
        assert!(k.imag_residual() <= 1e-10 * scale);
        assert!(k.solve_residual() <= 1e-10);
        let sv = k.matrix().singular_values().unwrap();
        let rank = sv.iter().filter(|&&s| s > 1e-10 * sv[0]).count();
        assert_eq!(rank, 21);
    }

    #[test]
    fn raw_filter_of_constant_and_dc() {
        let g = grid(16);
        let c = CoefficientField::constant(g, 2.0).unwrap();
        let b = ProjectionBasis::new(16, 3).unwrap();
        assert!(raw_filter_1d(&c, &b).unwrap().values().iter().all(|v| (v - 2.0).abs() < 1e-14));
        let a = gen_filtered_random(g, 9, 0.2).unwrap();
        let r = raw_filter_1d(&a, &ProjectionBasis::new(16, 0).unwrap()).unwrap();
        assert!(r.values().iter().all(|v| (v - a.mean()).abs() < 1e-13));
    }

    #[test]
    fn raw_filter_reports_nonpositive_output() {
        // A spike on a tiny floor overshoots below zero once truncated.
        let g = grid(32);
        let mut v = vec![0.01; 32];
        v[16] = 50.0;
        let a = CoefficientField::new(g, v, Provenance::default()).unwrap();
        let err = raw_filter_1d(&a, &ProjectionBasis::new(32, 3).unwrap()).unwrap_err();
        assert!(matches!(err, HomogError::DegenerateCoefficient { .. }));
    }

    #[test]
    fn offdiag_mass_bounds() {
        let g = grid(16);
        let basis = ProjectionBasis::new(16, 2).unwrap();
        let diag = Mat::<f64>::from_fn(16, 16, |i, j| if i == j { 1.0 + i as f64 } else { 0.0 });
        let k = HomogenizedKernel::from_matrix(g, basis.clone(), diag).unwrap();
        assert_eq!(offdiag_mass(&k).unwrap(), 0.0);
        let zero = HomogenizedKernel::from_matrix(g, basis, Mat::zeros(16, 16)).unwrap();
        assert!(matches!(offdiag_mass(&zero), Err(HomogError::UndefinedRatio(_))));
    }

    #[test]
    fn basis_grid_mismatch() {
        let a = CoefficientField::constant(grid(16), 1.0).unwrap();
        assert!(homogenize_kernel_1d(&a, &ProjectionBasis::new(32, 2).unwrap()).is_err());
    }
}
