use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{Grid1D, Grid2D};

/// Cell averages of a scalar on a 1D grid at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarField1D {
    pub grid: Grid1D,
    pub u: Vec<f64>,
    pub t: f64,
}

impl ScalarField1D {
    pub fn from_fn(grid: Grid1D, f: impl Fn(f64) -> f64) -> Self {
        let u = grid.centers().into_iter().map(f).collect();
        Self { grid, u, t: 0.0 }
    }

    pub fn from_values(grid: Grid1D, u: Vec<f64>, t: f64) -> Result<Self> {
        if u.len() != grid.n_cells {
            return Err(Error::Config(format!(
                "{} values for a {}-cell grid",
                u.len(),
                grid.n_cells
            )));
        }
        Ok(Self { grid, u, t })
    }

    /// Σ u_j · dx
    pub fn total(&self) -> f64 {
        self.u.iter().sum::<f64>() * self.grid.dx
    }

    pub fn total_variation(&self) -> f64 {
        total_variation(&self.u)
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

pub fn total_variation(u: &[f64]) -> f64 {
    u.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Cell states on a 2D grid, `ncomp` values per cell, row-major with x fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Field2D {
    pub grid: Grid2D,
    pub ncomp: usize,
    pub data: Vec<f64>,
    pub t: f64,
}

impl Field2D {
    pub fn from_fn(grid: Grid2D, ncomp: usize, f: impl Fn(f64, f64) -> Vec<f64>) -> Self {
        let mut data = Vec::with_capacity(grid.n_cells() * ncomp);
        for k in 0..grid.ny() {
            let y = grid.y.center(k as isize);
            for j in 0..grid.nx() {
                let v = f(grid.x.center(j as isize), y);
                debug_assert_eq!(v.len(), ncomp);
                data.extend_from_slice(&v);
            }
        }
        Self {
            grid,
            ncomp,
            data,
            t: 0.0,
        }
    }

    pub fn scalar_from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> f64) -> Self {
        Self::from_fn(grid, 1, |x, y| vec![f(x, y)])
    }

    #[inline]
    pub fn get(&self, j: usize, k: usize, c: usize) -> f64 {
        self.data[self.grid.index(j, k) * self.ncomp + c]
    }

    /// Component `c` as a flat row-major array.
    pub fn component(&self, c: usize) -> Vec<f64> {
        self.data.iter().skip(c).step_by(self.ncomp).copied().collect()
    }

    /// Σ U_c · dA
    pub fn total(&self, c: usize) -> f64 {
        self.component(c).iter().sum::<f64>() * self.grid.cell_area()
    }
}
