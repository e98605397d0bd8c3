//! Coefficient fields and the generators used by the experiments.
//!
//! All random generators draw from `ChaCha8Rng` seeded with `seed_from_u64`,
//! consuming one `f64` sample per grid point (or per retained mode) in
//! row-major order, so outputs are reproducible across platforms.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{HomogError, Result};
use crate::grid::GridSpec;
use crate::spectral_ops::{fft_index, max_imag, wavenumber, Fourier1d, Fourier2d};

/// Default water level added beneath generated random coefficients.
pub const DEFAULT_WATER_LEVEL: f64 = 0.1;

/// Where a field came from: generator name, seed and parameters.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Provenance {
    pub generator: String,
    pub seed: Option<u64>,
    pub params: Vec<(String, String)>,
}

impl Provenance {
    pub fn new(generator: &str) -> Self {
        Self {
            generator: generator.to_string(),
            ..Default::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    /// Compact single-line form, `name(seed=..;k=v;...)`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(s) = self.seed {
            parts.push(format!("seed={s}"));
        }
        parts.extend(self.params.iter().map(|(k, v)| format!("{k}={v}")));
        format!("{}({})", self.generator, parts.join(";"))
    }
}

/// Positive scalar coefficient sampled on a periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientField {
    grid: GridSpec,
    values: Vec<f64>,
    provenance: Provenance,
}

impl CoefficientField {
    /// Fails with a degenerate-coefficient error unless every value is positive
    /// and finite.
    pub fn new(grid: GridSpec, values: Vec<f64>, provenance: Provenance) -> Result<Self> {
        grid.check_len(values.len())?;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if !(min > 0.0) || values.iter().any(|v| !v.is_finite()) {
            return Err(HomogError::DegenerateCoefficient { min });
        }
        Ok(Self {
            grid,
            values,
            provenance,
        })
    }

    pub fn constant(grid: GridSpec, c: f64) -> Result<Self> {
        Self::new(
            grid,
            vec![c; grid.len()],
            Provenance::new("constant").param("value", c),
        )
    }

    /// Builds a field by evaluating `f(x, y)` at every sample.
    pub fn from_fn(grid: GridSpec, name: &str, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len());
        for j in 0..grid.ny() {
            for i in 0..grid.nx() {
                values.push(f(grid.x(i), grid.y(j)));
            }
        }
        Self::new(grid, values, Provenance::new(name))
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.index(i, j)]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn harmonic_mean(&self) -> f64 {
        self.values.len() as f64 / self.values.iter().map(|v| 1.0 / v).sum::<f64>()
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transposed(&self) -> Result<Self> {
        let g = GridSpec::new_2d(self.grid.ny(), self.grid.nx())?;
        let mut values = vec![0.0; g.len()];
        for j in 0..self.grid.ny() {
            for i in 0..self.grid.nx() {
                values[g.index(j, i)] = self.at(i, j);
            }
        }
        let prov = self.provenance.clone().param("transposed", true);
        Self::new(g, values, prov)
    }
}

/// Equal-measure two-phase square wave along `x`, `low` on the first half of
/// each period and `high` on the second. Constant along `y` on 2D grids.
pub fn gen_periodic(
    grid: GridSpec,
    low: f64,
    high: f64,
    period_cells: usize,
) -> Result<CoefficientField> {
    if !(low > 0.0 && high > 0.0) {
        return Err(HomogError::InvalidParameter(format!(
            "phase values must be positive, got low={low} high={high}"
        )));
    }
    if period_cells == 0 || period_cells % 2 != 0 || grid.nx() % period_cells != 0 {
        return Err(HomogError::InvalidParameter(format!(
            "period {period_cells} must be even and divide nx = {}",
            grid.nx()
        )));
    }
    let half = period_cells / 2;
    let mut values = Vec::with_capacity(grid.len());
    for _ in 0..grid.ny() {
        values.extend((0..grid.nx()).map(|i| if i % period_cells < half { low } else { high }));
    }
    let prov = Provenance::new("periodic")
        .param("low", low)
        .param("high", high)
        .param("period", period_cells);
    CoefficientField::new(grid, values, prov)
}

fn two_thirds_keep(k: i64, n: usize) -> bool {
    3 * k.unsigned_abs() as usize <= n
}

/// Band-limited random coefficient with a water level.
///
/// Draws i.i.d. uniform `[0, 1)` samples, zeroes every mode with `|k| > n/3`
/// on any axis, keeps the real part and shifts the field so its minimum equals
/// `water_level`.
pub fn gen_filtered_random(grid: GridSpec, seed: u64, water_level: f64) -> Result<CoefficientField> {
    if !(water_level > 0.0) {
        return Err(HomogError::InvalidParameter(format!(
            "water level must be positive, got {water_level}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf: Vec<Complex64> = (0..grid.len())
        .map(|_| Complex64::new(rng.random::<f64>(), 0.0))
        .collect();
    let (nx, ny) = (grid.nx(), grid.ny());
    let keep = |jx: usize, jy: usize| {
        two_thirds_keep(wavenumber(jx, nx), nx) && (ny == 1 || two_thirds_keep(wavenumber(jy, ny), ny))
    };
    if grid.is_2d() {
        let fft = Fourier2d::new(&grid);
        fft.forward(&mut buf);
        for jy in 0..ny {
            for jx in 0..nx {
                if !keep(jx, jy) {
                    buf[jy * nx + jx] = Complex64::new(0.0, 0.0);
                }
            }
        }
        fft.inverse(&mut buf);
    } else {
        let fft = Fourier1d::new(nx);
        fft.forward(&mut buf);
        for (jx, c) in buf.iter_mut().enumerate() {
            if !keep(jx, 0) {
                *c = Complex64::new(0.0, 0.0);
            }
        }
        fft.inverse(&mut buf);
    }
    let residual = max_imag(&buf);
    debug_assert!(residual <= 1e-12, "imaginary residual {residual}");
    let real: Vec<f64> = buf.into_iter().map(|c| c.re).collect();
    let min = real.iter().copied().fold(f64::INFINITY, f64::min);
    let values = real.into_iter().map(|v| v - min + water_level).collect();
    let prov = Provenance::new("filtered_random")
        .with_seed(seed)
        .param("water_level", water_level);
    CoefficientField::new(grid, values, prov)
}

/// Coefficient whose non-dc power is confined to the radial annulus
/// `k_min <= |k| <= k_max`.
///
/// Every annulus mode gets real-space amplitude `amplitude` and a uniformly
/// random phase (conjugate pairs share one draw). The dc level is chosen so
/// the minimum equals `water_level`.
pub fn gen_sparse_annulus(
    grid: GridSpec,
    seed: u64,
    k_min: usize,
    k_max: usize,
    amplitude: f64,
    water_level: f64,
) -> Result<CoefficientField> {
    let n_min = if grid.is_2d() { grid.nx().min(grid.ny()) } else { grid.nx() };
    if k_min == 0 || k_min > k_max || 3 * k_max >= n_min {
        return Err(HomogError::InvalidParameter(format!(
            "annulus [{k_min}, {k_max}] must satisfy 0 < k_min <= k_max < n/3 = {}",
            n_min as f64 / 3.0
        )));
    }
    if !(amplitude > 0.0 && water_level > 0.0) {
        return Err(HomogError::InvalidParameter(
            "amplitude and water level must be positive".into(),
        ));
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let (r2min, r2max) = ((k_min * k_min) as i64, (k_max * k_max) as i64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = vec![Complex64::new(0.0, 0.0); grid.len()];
    for jy in 0..ny {
        for jx in 0..nx {
            let (kx, ky) = (wavenumber(jx, nx), if ny == 1 { 0 } else { wavenumber(jy, ny) });
            let r2 = kx * kx + ky * ky;
            if r2 < r2min || r2 > r2max {
                continue;
            }
            let partner = fft_index(-ky, ny) * nx + fft_index(-kx, nx);
            let here = jy * nx + jx;
            if partner < here {
                continue;
            }
            let phase = 2.0 * PI * rng.random::<f64>();
            let c = Complex64::from_polar(amplitude, phase);
            buf[here] = c;
            buf[partner] = c.conj();
        }
    }
    if grid.is_2d() {
        Fourier2d::new(&grid).inverse_raw(&mut buf);
    } else {
        Fourier1d::new(nx).inverse_raw(&mut buf);
    }
    let residual = max_imag(&buf);
    debug_assert!(residual <= 1e-12 * amplitude * grid.len() as f64);
    let real: Vec<f64> = buf.into_iter().map(|c| c.re).collect();
    let min = real.iter().copied().fold(f64::INFINITY, f64::min);
    let values = real.into_iter().map(|v| v - min + water_level).collect();
    let prov = Provenance::new("sparse_annulus")
        .with_seed(seed)
        .param("k_min", k_min)
        .param("k_max", k_max)
        .param("amplitude", amplitude)
        .param("water_level", water_level);
    CoefficientField::new(grid, values, prov)
}
