use crate::error::{HomogError, Result};

/// Uniform periodic sampling of the unit interval (`ny == 1`) or the unit square.
///
/// Sample `(i, j)` sits at `(i / nx, j / ny)`. Two-dimensional fields are stored
/// row-major with `x` fastest: index `j * nx + i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    nx: usize,
    ny: usize,
}

fn check_axis(n: usize, axis: &str) -> Result<()> {
    if n < 4 || n % 2 != 0 {
        return Err(HomogError::InvalidGrid(format!(
            "{axis} resolution {n} must be even and at least 4"
        )));
    }
    Ok(())
}

impl GridSpec {
    pub fn new_1d(n: usize) -> Result<Self> {
        check_axis(n, "x")?;
        Ok(Self { nx: n, ny: 1 })
    }

    pub fn new_2d(nx: usize, ny: usize) -> Result<Self> {
        check_axis(nx, "x")?;
        check_axis(ny, "y")?;
        Ok(Self { nx, ny })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn is_2d(&self) -> bool {
        self.ny > 1
    }

    /// Total number of samples.
    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn hx(&self) -> f64 {
        1.0 / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        1.0 / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 / self.nx as f64
    }

    pub fn y(&self, j: usize) -> f64 {
        if self.ny == 1 {
            0.0
        } else {
            j as f64 / self.ny as f64
        }
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    pub fn check_len(&self, got: usize) -> Result<()> {
        if got != self.len() {
            return Err(HomogError::DimensionMismatch {
                expected: self.len(),
                got,
            });
        }
        Ok(())
    }
}
