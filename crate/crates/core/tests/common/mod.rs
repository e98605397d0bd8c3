//! Dense brute-force evaluation of the homogenization formulas with explicit
//! DFT matrices. Shared by the oracle tests and the acceptance suite.

#![allow(dead_code)]

use std::f64::consts::PI;

use fourier_homog::{CoefficientField, ProjectionBasis};
use nalgebra::{Complex, DMatrix};

type C = Complex<f64>;
type M = DMatrix<C>;

/// Rows of the unitary DFT for the given wavenumbers.
fn dft_rows(n: usize, ks: &[i64]) -> M {
    let s = 1.0 / (n as f64).sqrt();
    M::from_fn(ks.len(), n, |r, x| C::from_polar(s, -2.0 * PI * (ks[r] * x as i64) as f64 / n as f64))
}

fn diag_real(v: &[f64]) -> M {
    M::from_diagonal(&nalgebra::DVector::from_iterator(v.len(), v.iter().map(|&x| C::new(x, 0.0))))
}

fn diag_c(v: impl Iterator<Item = C>) -> M {
    let v: Vec<C> = v.collect();
    M::from_diagonal(&nalgebra::DVector::from_vec(v))
}

pub fn oracle_kernel_1d(a: &CoefficientField, basis: &ProjectionBasis) -> M {
    let n = basis.n();
    let p = dft_rows(n, basis.coarse_wavenumbers());
    let q = dft_rows(n, basis.fine_wavenumbers());
    let am = diag_real(a.values());
    let pstar_p = p.adjoint() * &p;
    let qaq = &q * &am * q.adjoint();
    let inner = &am - &am * q.adjoint() * qaq.try_inverse().unwrap() * &q * &am;
    &pstar_p * inner * &pstar_p
}

/// The four tensor components by literal evaluation of the block formulas,
/// with imaginary derivative symbols `i 2π k` and Kronecker-product projections.
///
/// Returns the real parts and the largest imaginary part on any diagonal. The
/// Nyquist symbol `+iπn` has no conjugate partner, so the diagonals are only
/// real up to that residual.
pub fn oracle_tensor_2d(
    a: &CoefficientField,
    bx: &ProjectionBasis,
    by: &ProjectionBasis,
) -> ([Vec<f64>; 4], f64) {
    let (nx, ny) = (bx.n(), by.n());
    let (px, qx) = (dft_rows(nx, bx.coarse_wavenumbers()), dft_rows(nx, bx.fine_wavenumbers()));
    let (py, qy) = (dft_rows(ny, by.coarse_wavenumbers()), dft_rows(ny, by.fine_wavenumbers()));
    // Index j * nx + i, so the 2D operator on (x, y) is (y-part) ⊗ (x-part).
    let pp = py.kronecker(&px);
    let qp = py.kronecker(&qx);
    let pq = qy.kronecker(&px);
    let qq = qy.kronecker(&qx);
    let fine_ops = [&qp, &pq, &qq];
    let fine_rows: usize = fine_ops.iter().map(|m| m.nrows()).sum();
    let mut fine = M::zeros(fine_rows, nx * ny);
    let mut r0 = 0;
    for m in fine_ops {
        fine.view_mut((r0, 0), (m.nrows(), m.ncols())).copy_from(m);
        r0 += m.nrows();
    }

    let ik = |k: i64| C::new(0.0, 2.0 * PI * k as f64);
    let (xc, xf) = (bx.coarse_wavenumbers(), bx.fine_wavenumbers());
    let (yc, yf) = (by.coarse_wavenumbers(), by.fine_wavenumbers());
    let kron_modes = |ys: &[i64], xs: &[i64]| -> Vec<(i64, i64)> {
        ys.iter().flat_map(|&y| xs.iter().map(move |&x| (x, y))).collect()
    };
    let fine_modes: Vec<(i64, i64)> = [kron_modes(yc, xf), kron_modes(yf, xc), kron_modes(yf, xf)].concat();
    let kx = diag_c(fine_modes.iter().map(|m| ik(m.0)));
    let ky = diag_c(fine_modes.iter().map(|m| ik(m.1)));

    let am = diag_real(a.values());
    let d = &pp * &am * pp.adjoint();
    let c = &pp * &am * fine.adjoint();
    let b = &fine * &am * pp.adjoint();
    let big_a = &fine * &am * fine.adjoint();
    let g_inv = (&kx * &big_a * &kx + &ky * &big_a * &ky).try_inverse().unwrap();

    let scale = (nx * ny) as f64 / pp.nrows() as f64;
    let mut imag = 0.0_f64;
    let mut field = |m: M| -> Vec<f64> {
        let full = pp.adjoint() * m * &pp;
        (0..nx * ny)
            .map(|i| {
                imag = imag.max(scale * full[(i, i)].im.abs());
                scale * full[(i, i)].re
            })
            .collect()
    };
    let xx = field(&d - &c * &kx * &g_inv * &kx * &b);
    let xy = field(-(&c * &kx * &g_inv * &ky * &b));
    let yx = field(-(&c * &ky * &g_inv * &kx * &b));
    let yy = field(&d - &c * &ky * &g_inv * &ky * &b);
    ([xx, xy, yx, yy], imag)
}

