use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest grid the four-point limited stencil can run on.
pub const MIN_CELLS: usize = 4;

/// Uniform cell-centred grid on `[x_min, x_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub dx: f64,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(Error::Config(format!(
                "domain [{x_min}, {x_max}] is empty or inverted"
            )));
        }
        if n_cells < MIN_CELLS {
            return Err(Error::Config(format!(
                "{n_cells} cells is below the minimum of {MIN_CELLS}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n_cells,
            dx: (x_max - x_min) / n_cells as f64,
        })
    }

    /// Centre of cell `j`; also valid for ghost indices outside `0..n_cells`.
    #[inline]
    pub fn center(&self, j: isize) -> f64 {
        self.x_min + (j as f64 + 0.5) * self.dx
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells as isize).map(|j| self.center(j)).collect()
    }
}

/// Convenience wrapper matching the free-function style used by the solvers.
pub fn build_grid_1d(x_min: f64, x_max: f64, n: usize) -> Result<Grid1D> {
    Grid1D::new(x_min, x_max, n)
}

/// Uniform Cartesian grid; cells are indexed `(j, k)` with `j` along x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Result<Self> {
        Ok(Self {
            x: Grid1D::new(x.0, x.1, nx)?,
            y: Grid1D::new(y.0, y.1, ny)?,
        })
    }

    pub fn nx(&self) -> usize {
        self.x.n_cells
    }

    pub fn ny(&self) -> usize {
        self.y.n_cells
    }

    pub fn dx(&self) -> f64 {
        self.x.dx
    }

    pub fn dy(&self) -> f64 {
        self.y.dx
    }

    pub fn cell_area(&self) -> f64 {
        self.x.dx * self.y.dx
    }

    /// Length of a face normal to x (a vertical face) and normal to y.
    pub fn face_lengths(&self) -> (f64, f64) {
        (self.y.dx, self.x.dx)
    }

    pub fn n_cells(&self) -> usize {
        self.nx() * self.ny()
    }

    #[inline]
    pub fn index(&self, j: usize, k: usize) -> usize {
        k * self.nx() + j
    }
}
