//! Fourier projection operators on periodic grids.
//!
//! The forward transform is unitary: row `k` of the transform matrix is
//! `exp(-2πi k j / n) / sqrt(n)`. Splitting its rows into a coarse set
//! (`|k| <= cutoff`) and a fine set (everything else) gives the projections
//! `P` and `Q`, with
//!
//! ```text
//! P P* = I,  Q Q* = I,  P Q* = 0,  Q P* = 0,  P*P + Q*Q = I.
//! ```
//!
//! Spectral coefficients are stored in increasing signed wavenumber order
//! `-n/2+1, ..., n/2`. The Nyquist index `n/2` always belongs to the fine set of
//! a cut basis.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{HomogError, Result};
use crate::grid::GridSpec;

/// Signed wavenumber of FFT output index `j` on an axis of length `n`.
#[inline]
pub fn wavenumber(j: usize, n: usize) -> i64 {
    if j <= n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// FFT output index holding signed wavenumber `k`.
#[inline]
pub fn fft_index(k: i64, n: usize) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Position of wavenumber `k` in the signed storage order.
#[inline]
pub fn slot(k: i64, n: usize) -> usize {
    (k + n as i64 / 2 - 1) as usize
}

/// Signed wavenumbers of an axis in storage order.
pub fn signed_wavenumbers(n: usize) -> impl Iterator<Item = i64> {
    let half = n as i64 / 2;
    (-half + 1)..=half
}

/// Largest absolute imaginary part in a complex slice.
pub fn max_imag(values: &[Complex64]) -> f64 {
    values.iter().fold(0.0_f64, |m, c| m.max(c.im.abs()))
}

/// Coarse/fine partition of the Fourier indices of one axis.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionBasis {
    n: usize,
    cutoff: Option<usize>,
    coarse: Vec<i64>,
    fine: Vec<i64>,
}

impl ProjectionBasis {
    /// Coarse set `{k : |k| <= cutoff}`; the fine set is the complement,
    /// Nyquist included.
    pub fn new(n: usize, cutoff: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(HomogError::InvalidGrid(format!(
                "axis length {n} must be even and at least 4"
            )));
        }
        if cutoff >= n / 2 {
            return Err(HomogError::InvalidCutoff { cutoff, n });
        }
        let c = cutoff as i64;
        let (coarse, fine) = signed_wavenumbers(n).partition(|k| k.abs() <= c);
        Ok(Self {
            n,
            cutoff: Some(cutoff),
            coarse,
            fine,
        })
    }

    /// Every index, Nyquist included, is coarse and the fine set is empty.
    ///
    /// This is the only basis whose coarse set contains the Nyquist mode; the
    /// homogenizers reduce to the identity on it.
    pub fn full_retention(n: usize) -> Result<Self> {
        if n < 4 || n % 2 != 0 {
            return Err(HomogError::InvalidGrid(format!(
                "axis length {n} must be even and at least 4"
            )));
        }
        Ok(Self {
            n,
            cutoff: None,
            coarse: signed_wavenumbers(n).collect(),
            fine: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `None` for a full-retention basis.
    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff
    }

    pub fn is_full(&self) -> bool {
        self.cutoff.is_none()
    }

    /// `k_p`
    pub fn coarse_count(&self) -> usize {
        self.coarse.len()
    }

    /// `k_q = n - k_p`
    pub fn fine_count(&self) -> usize {
        self.fine.len()
    }

    pub fn coarse_wavenumbers(&self) -> &[i64] {
        &self.coarse
    }

    pub fn fine_wavenumbers(&self) -> &[i64] {
        &self.fine
    }

    pub fn is_coarse(&self, k: i64) -> bool {
        match self.cutoff {
            None => true,
            Some(c) => k.abs() <= c as i64,
        }
    }
}

/// Builds the projection basis of a one-dimensional grid.
pub fn build_projection(grid: &GridSpec, cutoff: usize) -> Result<ProjectionBasis> {
    if grid.is_2d() {
        return Err(HomogError::InvalidGrid(
            "build_projection expects a 1D grid; use Basis2D for two axes".into(),
        ));
    }
    ProjectionBasis::new(grid.nx(), cutoff)
}

/// Cached unitary FFT plans for one axis length.
#[derive(Clone)]
pub struct Fourier1d {
    n: usize,
    scale: f64,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Fourier1d {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fourier1d").field("n", &self.n).finish()
    }
}

impl Fourier1d {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            scale: 1.0 / (n as f64).sqrt(),
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// In-place unitary forward transform, output in FFT index order.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
    }

    /// In-place unitary inverse transform, input in FFT index order.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
        buf.iter_mut().for_each(|c| *c *= self.scale);
    }

    /// Unnormalized forward transform.
    pub fn forward_raw(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
    }

    /// Unnormalized inverse transform.
    pub fn inverse_raw(&self, buf: &mut [Complex64]) {
        self.inv.process(buf);
    }
}

/// Normalization convention of a spectral vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Unitary,
}

/// Spectral coefficients of a 1D field together with their coarse/fine tags.
#[derive(Clone, Debug)]
pub struct SpectralVector {
    coeffs: Vec<Complex64>,
    coarse: Vec<bool>,
    normalization: Normalization,
}

impl SpectralVector {
    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficients in signed storage order.
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coefficient(&self, k: i64) -> Complex64 {
        self.coeffs[slot(k, self.n())]
    }

    pub fn is_coarse_slot(&self, s: usize) -> bool {
        self.coarse[s]
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    /// `u_P`
    pub fn coarse_part(&self) -> Vec<Complex64> {
        self.partition(true)
    }

    /// `u_Q`
    pub fn fine_part(&self) -> Vec<Complex64> {
        self.partition(false)
    }

    fn partition(&self, coarse: bool) -> Vec<Complex64> {
        self.coeffs
            .iter()
            .zip(&self.coarse)
            .filter(|(_, &c)| c == coarse)
            .map(|(v, _)| *v)
            .collect()
    }

    /// Sets every fine coefficient to zero.
    pub fn zero_fine(&mut self) {
        for (v, &c) in self.coeffs.iter_mut().zip(&self.coarse) {
            if !c {
                *v = Complex64::new(0.0, 0.0);
            }
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Inverse unitary transform back to real space.
    pub fn inverse(&self) -> Vec<Complex64> {
        let n = self.n();
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (s, k) in signed_wavenumbers(n).enumerate() {
            buf[fft_index(k, n)] = self.coeffs[s];
        }
        Fourier1d::new(n).inverse(&mut buf);
        buf
    }

    /// Real part of the inverse transform and the largest discarded imaginary part.
    pub fn inverse_real(&self) -> (Vec<f64>, f64) {
        let z = self.inverse();
        let residual = max_imag(&z);
        (z.into_iter().map(|c| c.re).collect(), residual)
    }
}

/// Forward unitary transform of a real vector, tagged with the basis partition.
pub fn forward(v: &[f64], basis: &ProjectionBasis) -> Result<SpectralVector> {
    let n = basis.n();
    if v.len() != n {
        return Err(HomogError::DimensionMismatch {
            expected: n,
            got: v.len(),
        });
    }
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Fourier1d::new(n).forward(&mut buf);
    let coeffs = signed_wavenumbers(n).map(|k| buf[fft_index(k, n)]).collect();
    let coarse = signed_wavenumbers(n).map(|k| basis.is_coarse(k)).collect();
    Ok(SpectralVector {
        coeffs,
        coarse,
        normalization: Normalization::Unitary,
    })
}

/// Inverse of [`forward`], real part only.
pub fn inverse(sv: &SpectralVector) -> Vec<f64> {
    sv.inverse_real().0
}

fn check_len(basis: &ProjectionBasis, got: usize) -> Result<()> {
    if got != basis.n() {
        return Err(HomogError::DimensionMismatch {
            expected: basis.n(),
            got,
        });
    }
    Ok(())
}

fn gather(v: &[Complex64], ks: &[i64], n: usize) -> Vec<Complex64> {
    let mut buf = v.to_vec();
    Fourier1d::new(n).forward(&mut buf);
    ks.iter().map(|&k| buf[fft_index(k, n)]).collect()
}

fn scatter(w: &[Complex64], ks: &[i64], n: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for (&k, &c) in ks.iter().zip(w) {
        buf[fft_index(k, n)] = c;
    }
    Fourier1d::new(n).inverse(&mut buf);
    buf
}

/// `P v` (length `k_p`).
pub fn apply_p(v: &[Complex64], basis: &ProjectionBasis) -> Result<Vec<Complex64>> {
    check_len(basis, v.len())?;
    Ok(gather(v, basis.coarse_wavenumbers(), basis.n()))
}

/// `Q v` (length `k_q`).
pub fn apply_q(v: &[Complex64], basis: &ProjectionBasis) -> Result<Vec<Complex64>> {
    check_len(basis, v.len())?;
    Ok(gather(v, basis.fine_wavenumbers(), basis.n()))
}

/// `P* w` for coarse coefficients `w`.
pub fn apply_p_adjoint(w: &[Complex64], basis: &ProjectionBasis) -> Result<Vec<Complex64>> {
    if w.len() != basis.coarse_count() {
        return Err(HomogError::DimensionMismatch {
            expected: basis.coarse_count(),
            got: w.len(),
        });
    }
    Ok(scatter(w, basis.coarse_wavenumbers(), basis.n()))
}

/// `Q* w` for fine coefficients `w`.
pub fn apply_q_adjoint(w: &[Complex64], basis: &ProjectionBasis) -> Result<Vec<Complex64>> {
    if w.len() != basis.fine_count() {
        return Err(HomogError::DimensionMismatch {
            expected: basis.fine_count(),
            got: w.len(),
        });
    }
    Ok(scatter(w, basis.fine_wavenumbers(), basis.n()))
}

fn project_real(v: &[f64], basis: &ProjectionBasis, coarse: bool) -> Result<Vec<f64>> {
    check_len(basis, v.len())?;
    let n = basis.n();
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let fft = Fourier1d::new(n);
    fft.forward(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        if basis.is_coarse(wavenumber(j, n)) != coarse {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    fft.inverse(&mut buf);
    Ok(buf.into_iter().map(|c| c.re).collect())
}

/// `P*P v`: zero every fine coefficient and transform back.
///
/// The coarse set is conjugation-symmetric, so the result of a real input is
/// real up to rounding; the imaginary part is dropped.
pub fn coarse_project(v: &[f64], basis: &ProjectionBasis) -> Result<Vec<f64>> {
    project_real(v, basis, true)
}

/// `Q*Q v`.
pub fn fine_project(v: &[f64], basis: &ProjectionBasis) -> Result<Vec<f64>> {
    project_real(v, basis, false)
}

/// Diagonals of the projected derivative operator, `K_P` and `K_Q`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeSpectrum {
    pub coarse: Vec<Complex64>,
    pub fine: Vec<Complex64>,
}

/// Derivative symbol on the unit domain: `i 2π k`. The Nyquist entry is `+i π n`.
#[inline]
pub fn derivative_symbol(k: i64) -> Complex64 {
    Complex64::new(0.0, 2.0 * PI * k as f64)
}

pub fn derivative_spectrum(basis: &ProjectionBasis) -> DerivativeSpectrum {
    DerivativeSpectrum {
        coarse: basis.coarse_wavenumbers().iter().map(|&k| derivative_symbol(k)).collect(),
        fine: basis.fine_wavenumbers().iter().map(|&k| derivative_symbol(k)).collect(),
    }
}

/// Spectral derivative of a periodic real field on the unit interval.
///
/// The Nyquist term contributes a purely imaginary component for real input
/// and is therefore dropped.
pub fn spectral_derivative(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let fft = Fourier1d::new(n);
    let mut buf: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft.forward(&mut buf);
    for (j, c) in buf.iter_mut().enumerate() {
        let k = wavenumber(j, n);
        *c = if 2 * k.unsigned_abs() as usize == n {
            Complex64::new(0.0, 0.0)
        } else {
            *c * derivative_symbol(k)
        };
    }
    fft.inverse(&mut buf);
    buf.into_iter().map(|c| c.re).collect()
}

/// Normalized Fourier coefficients `â(m) = (1/n) Σ_j a_j exp(-2πi m j / n)` of a
/// real 1D field, in FFT index order.
///
/// With this scaling the unitary sandwich `F diag(a) F*` has entries
/// `â(k - k')`. Conjugate symmetry is imposed exactly so the blocks of the
/// sandwich are exact adjoints of each other.
pub fn coefficient_spectrum_1d(a: &[f64]) -> Vec<Complex64> {
    let n = a.len();
    let mut buf: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Fourier1d::new(n).forward_raw(&mut buf);
    let inv_n = 1.0 / n as f64;
    buf.iter_mut().for_each(|c| *c *= inv_n);
    symmetrize(&mut buf, n, 1);
    buf
}

/// Two-dimensional analogue of [`coefficient_spectrum_1d`]; entry
/// `my_index * nx + mx_index`.
pub fn coefficient_spectrum_2d(a: &[f64], grid: &GridSpec) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    Fourier2d::new(grid).forward_raw(&mut buf);
    let inv_n = 1.0 / grid.len() as f64;
    buf.iter_mut().for_each(|c| *c *= inv_n);
    symmetrize(&mut buf, grid.nx(), grid.ny());
    buf
}

fn symmetrize(buf: &mut [Complex64], nx: usize, ny: usize) {
    for jy in 0..ny {
        for jx in 0..nx {
            let (cx, cy) = ((nx - jx) % nx, (ny - jy) % ny);
            let (p, q) = (jy * nx + jx, cy * nx + cx);
            if p < q {
                let avg = (buf[p] + buf[q].conj()) * 0.5;
                buf[p] = avg;
                buf[q] = avg.conj();
            } else if p == q {
                buf[p].im = 0.0;
            }
        }
    }
}

/// Cached unitary 2D transform (x transforms along rows, then y along columns).
#[derive(Clone, Debug)]
pub struct Fourier2d {
    nx: usize,
    ny: usize,
    x: Fourier1d,
    y: Fourier1d,
}

impl Fourier2d {
    pub fn new(grid: &GridSpec) -> Self {
        Self {
            nx: grid.nx(),
            ny: grid.ny(),
            x: Fourier1d::new(grid.nx()),
            y: Fourier1d::new(grid.ny()),
        }
    }

    fn along_x(&self, buf: &mut [Complex64], f: impl Fn(&Fourier1d, &mut [Complex64])) {
        for row in buf.chunks_exact_mut(self.nx) {
            f(&self.x, row);
        }
    }

    fn along_y(&self, buf: &mut [Complex64], f: impl Fn(&Fourier1d, &mut [Complex64])) {
        let mut col = vec![Complex64::new(0.0, 0.0); self.ny];
        for i in 0..self.nx {
            for j in 0..self.ny {
                col[j] = buf[j * self.nx + i];
            }
            f(&self.y, &mut col);
            for j in 0..self.ny {
                buf[j * self.nx + i] = col[j];
            }
        }
    }

    pub fn forward(&self, buf: &mut [Complex64]) {
        self.along_x(buf, |t, b| t.forward(b));
        self.along_y(buf, |t, b| t.forward(b));
    }

    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.along_x(buf, |t, b| t.inverse(b));
        self.along_y(buf, |t, b| t.inverse(b));
    }

    pub fn forward_raw(&self, buf: &mut [Complex64]) {
        self.along_x(buf, |t, b| t.forward_raw(b));
        self.along_y(buf, |t, b| t.forward_raw(b));
    }

    pub fn inverse_raw(&self, buf: &mut [Complex64]) {
        self.along_x(buf, |t, b| t.inverse_raw(b));
        self.along_y(buf, |t, b| t.inverse_raw(b));
    }
}

/// Coordinate axis of a 2D field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

/// Which half of a partition to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Coarse,
    Fine,
}

/// Applies `P*P` or `Q*Q` of one axis to a complex 2D field, leaving the other
/// axis untouched.
pub fn project_axis(
    field: &[Complex64],
    grid: &GridSpec,
    axis: Axis,
    basis: &ProjectionBasis,
    part: Part,
) -> Result<Vec<Complex64>> {
    grid.check_len(field.len())?;
    let n = match axis {
        Axis::X => grid.nx(),
        Axis::Y => grid.ny(),
    };
    if basis.n() != n {
        return Err(HomogError::DimensionMismatch {
            expected: n,
            got: basis.n(),
        });
    }
    let keep_coarse = part == Part::Coarse;
    let fft = Fourier1d::new(n);
    let apply = |line: &mut [Complex64]| {
        fft.forward(line);
        for (j, c) in line.iter_mut().enumerate() {
            if basis.is_coarse(wavenumber(j, n)) != keep_coarse {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        fft.inverse(line);
    };
    let mut out = field.to_vec();
    match axis {
        Axis::X => out.chunks_exact_mut(grid.nx()).for_each(apply),
        Axis::Y => {
            let mut col = vec![Complex64::new(0.0, 0.0); grid.ny()];
            for i in 0..grid.nx() {
                for j in 0..grid.ny() {
                    col[j] = out[grid.index(i, j)];
                }
                apply(&mut col);
                for j in 0..grid.ny() {
                    out[grid.index(i, j)] = col[j];
                }
            }
        }
    }
    Ok(out)
}

/// `P_x* P_y* P_x P_y v` for a real 2D field.
pub fn coarse_project_2d(
    v: &[f64],
    grid: &GridSpec,
    bx: &ProjectionBasis,
    by: &ProjectionBasis,
) -> Result<Vec<f64>> {
    let z: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let z = project_axis(&z, grid, Axis::X, bx, Part::Coarse)?;
    let z = project_axis(&z, grid, Axis::Y, by, Part::Coarse)?;
    Ok(z.into_iter().map(|c| c.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_real(n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| rng.random::<f64>() - 0.5).collect()
    }

    fn cplx(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn projection_counts() {
        let b = ProjectionBasis::new(8, 1).unwrap();
        assert_eq!(b.coarse_wavenumbers(), &[-1, 0, 1]);
        assert_eq!((b.coarse_count(), b.fine_count()), (3, 5));

        let b = ProjectionBasis::new(8, 0).unwrap();
        assert_eq!(b.coarse_wavenumbers(), &[0]);

        let b = ProjectionBasis::new(8, 3).unwrap();
        assert_eq!((b.coarse_count(), b.fine_count()), (7, 1));
        assert_eq!(b.fine_wavenumbers(), &[4]);
    }

    #[test]
    fn cutoff_reaching_nyquist_is_rejected() {
        assert!(matches!(
            ProjectionBasis::new(8, 4),
            Err(HomogError::InvalidCutoff { cutoff: 4, n: 8 })
        ));
        let g = GridSpec::new_1d(8).unwrap();
        assert!(build_projection(&g, 5).is_err());
    }

    #[test]
    fn full_retention_has_no_fine_modes() {
        let b = ProjectionBasis::full_retention(8).unwrap();
        assert_eq!(b.coarse_count(), 8);
        assert_eq!(b.fine_count(), 0);
        assert!(b.is_coarse(4));
    }

    #[test]
    fn constant_has_only_dc() {
        let b = ProjectionBasis::new(16, 2).unwrap();
        let sv = forward(&[3.0; 16], &b).unwrap();
        for k in signed_wavenumbers(16) {
            let c = sv.coefficient(k);
            if k == 0 {
                assert!((c.re - 3.0 * 4.0).abs() < 1e-12);
            } else {
                assert!(c.norm() < 1e-12);
            }
        }
    }

    #[test]
    fn single_harmonic_has_two_coefficients() {
        let n = 32;
        let v: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos()).collect();
        let sv = forward(&v, &ProjectionBasis::new(n, 1).unwrap()).unwrap();
        for k in signed_wavenumbers(n) {
            let mag = sv.coefficient(k).norm();
            if k.abs() == 1 {
                assert!((mag - (n as f64).sqrt() / 2.0).abs() < 1e-12);
            } else {
                assert!(mag < 1e-12, "k={k} mag={mag}");
            }
        }
    }

    #[test]
    fn round_trip_and_parseval() {
        let n = 64;
        let v = random_real(n, 7);
        let sv = forward(&v, &ProjectionBasis::new(n, 5).unwrap()).unwrap();
        let back = inverse(&sv);
        let err = v.iter().zip(&back).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-12);
        let e: f64 = v.iter().map(|x| x * x).sum();
        assert!((sv.norm_sqr() - e).abs() <= 1e-12 * e);
    }

    #[test]
    fn size_mismatch_is_reported() {
        let b = ProjectionBasis::new(16, 2).unwrap();
        assert!(matches!(
            forward(&[1.0; 15], &b),
            Err(HomogError::DimensionMismatch { expected: 16, got: 15 })
        ));
    }

    #[test]
    fn dc_projection_is_mean() {
        let v = random_real(32, 3);
        let mean = v.iter().sum::<f64>() / 32.0;
        let p = coarse_project(&v, &ProjectionBasis::new(32, 0).unwrap()).unwrap();
        assert!(p.iter().all(|x| (x - mean).abs() < 1e-14));
    }

    #[test]
    fn band_limited_field_survives_widest_cut() {
        let n = 16;
        let v: Vec<f64> = (0..n)
            .map(|j| {
                let x = j as f64 / n as f64;
                1.0 + (2.0 * PI * 7.0 * x).sin() + 0.3 * (2.0 * PI * 3.0 * x).cos()
            })
            .collect();
        let p = coarse_project(&v, &ProjectionBasis::new(n, 7).unwrap()).unwrap();
        let err = v.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-13);
    }

    #[test]
    fn coarse_projection_is_idempotent() {
        let b = ProjectionBasis::new(64, 9).unwrap();
        let v = random_real(64, 11);
        let once = coarse_project(&v, &b).unwrap();
        let twice = coarse_project(&once, &b).unwrap();
        let err = once.iter().zip(&twice).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn derivative_diagonals() {
        let b = ProjectionBasis::new(8, 1).unwrap();
        let d = derivative_spectrum(&b);
        let expect = [-2.0 * PI, 0.0, 2.0 * PI];
        for (c, e) in d.coarse.iter().zip(expect) {
            assert_eq!(c.re, 0.0);
            assert!((c.im - e).abs() < 1e-15);
        }
        let min_fine = d.fine.iter().map(|c| c.norm()).fold(f64::INFINITY, f64::min);
        assert!((min_fine - 2.0 * PI * 2.0).abs() < 1e-12);
        // Nyquist entry carries the + sign.
        assert!((d.fine.last().unwrap().im - PI * 8.0).abs() < 1e-12);
    }

    #[test]
    fn derivative_of_sine() {
        let n = 64;
        let v: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).sin()).collect();
        let dv = spectral_derivative(&v);
        for (j, d) in dv.iter().enumerate() {
            let expect = 2.0 * PI * (2.0 * PI * j as f64 / n as f64).cos();
            assert!((d - expect).abs() <= 1e-10);
        }
    }

    #[test]
    fn adjoint_identities_on_random_vectors() {
        let n = 32;
        let b = ProjectionBasis::new(n, 6).unwrap();
        let v = cplx(&random_real(n, 5));
        let pv = apply_p(&v, &b).unwrap();
        let qv = apply_q(&v, &b).unwrap();
        // P P* = I and P Q* = 0
        let ppv = apply_p(&apply_p_adjoint(&pv, &b).unwrap(), &b).unwrap();
        let pqv = apply_p(&apply_q_adjoint(&qv, &b).unwrap(), &b).unwrap();
        for (x, y) in pv.iter().zip(&ppv) {
            assert!((x - y).norm() < 1e-12);
        }
        assert!(pqv.iter().all(|c| c.norm() < 1e-12));
        // P*P + Q*Q = I
        let a = apply_p_adjoint(&pv, &b).unwrap();
        let c = apply_q_adjoint(&qv, &b).unwrap();
        for ((x, y), z) in a.iter().zip(&c).zip(&v) {
            assert!((x + y - z).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficient_spectrum_matches_sandwich_entries() {
        let n = 8;
        let a = random_real(n, 2).iter().map(|x| x + 2.0).collect::<Vec<_>>();
        let ah = coefficient_spectrum_1d(&a);
        // (F a F*)[k, k'] by direct summation
        for k in signed_wavenumbers(n) {
            for kp in signed_wavenumbers(n) {
                let mut s = Complex64::new(0.0, 0.0);
                for (j, &aj) in a.iter().enumerate() {
                    let ph = -2.0 * PI * (k - kp) as f64 * j as f64 / n as f64;
                    s += Complex64::from_polar(aj / n as f64, ph);
                }
                assert!((s - ah[fft_index(k - kp, n)]).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn two_dimensional_projections_commute() {
        let g = GridSpec::new_2d(16, 8).unwrap();
        let bx = ProjectionBasis::new(16, 3).unwrap();
        let by = ProjectionBasis::new(8, 1).unwrap();
        let v = cplx(&random_real(g.len(), 9));
        for (px, py) in [(Part::Coarse, Part::Fine), (Part::Fine, Part::Coarse)] {
            let xy = project_axis(&project_axis(&v, &g, Axis::X, &bx, px).unwrap(), &g, Axis::Y, &by, py)
                .unwrap();
            let yx = project_axis(&project_axis(&v, &g, Axis::Y, &by, py).unwrap(), &g, Axis::X, &bx, px)
                .unwrap();
            let err = xy.iter().zip(&yx).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err < 1e-12);
        }
    }
}
