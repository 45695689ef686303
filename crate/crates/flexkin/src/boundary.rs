use crate::error::{Error, Result};
use crate::field::ScalarField1D;

/// Ghost-value rule at one end of a grid line.
#[derive(Debug, Clone, Copy)]
pub enum Side {
    /// Ghost cells hold the boundary value.
    Dirichlet(f64),
    /// Ghost cells mirror the interior oddly so the value is attained on the boundary face.
    DirichletFace(f64),
    /// Zero-order copy of the nearest interior cell.
    Extrapolate,
    Periodic,
    /// Even mirror; shallow-water solvers flip the normal momentum.
    Reflect,
    /// Ghost value from a prescribed function of (x, y, t) at the ghost centre.
    Profile(fn(f64, f64, f64) -> f64),
}

impl Side {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Side::Periodic)
    }
}

/// Left/right rules for a 1D problem.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryCondition {
    pub left: Side,
    pub right: Side,
}

impl BoundaryCondition {
    pub fn new(left: Side, right: Side) -> Result<Self> {
        check_pair(&left, &right)?;
        Ok(Self { left, right })
    }

    pub fn periodic() -> Self {
        Self {
            left: Side::Periodic,
            right: Side::Periodic,
        }
    }

    pub fn extrapolate() -> Self {
        Self {
            left: Side::Extrapolate,
            right: Side::Extrapolate,
        }
    }

    pub fn dirichlet(left: f64, right: f64) -> Self {
        Self {
            left: Side::Dirichlet(left),
            right: Side::Dirichlet(right),
        }
    }
}

pub(crate) fn check_pair(lo: &Side, hi: &Side) -> Result<()> {
    if lo.is_periodic() != hi.is_periodic() {
        return Err(Error::Config(
            "periodic boundaries must be set on both sides or neither".into(),
        ));
    }
    Ok(())
}

/// Ghost placement information for one grid line.
pub(crate) struct LineGeometry<F: Fn(isize) -> (f64, f64)> {
    /// Position of cell `i` (ghosts included) in the plane.
    pub point: F,
    pub t: f64,
    /// Flip sign under `Reflect` (normal momentum).
    pub odd: bool,
}

/// Extends `u` by `width` ghost cells on each side.
pub(crate) fn pad_line<F: Fn(isize) -> (f64, f64)>(
    u: &[f64],
    lo: &Side,
    hi: &Side,
    width: usize,
    geom: &LineGeometry<F>,
) -> Vec<f64> {
    let n = u.len();
    let mut out = Vec::with_capacity(n + 2 * width);
    for i in 0..width {
        // distance from the boundary: 1 for the innermost ghost
        let d = width - i;
        out.push(ghost(u, lo, d, false, geom));
    }
    out.extend_from_slice(u);
    for d in 1..=width {
        out.push(ghost(u, hi, d, true, geom));
    }
    out
}

fn ghost<F: Fn(isize) -> (f64, f64)>(
    u: &[f64],
    side: &Side,
    d: usize,
    high: bool,
    geom: &LineGeometry<F>,
) -> f64 {
    let n = u.len();
    // interior cell mirrored across the boundary face
    let mirror = if high { n - d } else { d - 1 };
    let idx: isize = if high {
        (n - 1 + d) as isize
    } else {
        -(d as isize)
    };
    match *side {
        Side::Dirichlet(v) => v,
        Side::DirichletFace(v) => 2.0 * v - u[mirror],
        Side::Extrapolate => {
            if high {
                u[n - 1]
            } else {
                u[0]
            }
        }
        Side::Periodic => {
            if high {
                u[(d - 1) % n]
            } else {
                u[(n - d % n) % n]
            }
        }
        Side::Reflect => {
            if geom.odd {
                -u[mirror]
            } else {
                u[mirror]
            }
        }
        Side::Profile(f) => {
            let (x, y) = (geom.point)(idx);
            f(x, y, geom.t)
        }
    }
}

/// Returns `n + 2·width` values: ghosts, interior, ghosts.
pub fn pad_with_ghosts(
    field: &ScalarField1D,
    bc: &BoundaryCondition,
    width: usize,
) -> Result<Vec<f64>> {
    if !(width == 1 || width == 2) {
        return Err(Error::Config(format!("ghost width {width} must be 1 or 2")));
    }
    if field.u.len() < width {
        return Err(Error::Config("field shorter than ghost width".into()));
    }
    check_pair(&bc.left, &bc.right)?;
    let grid = &field.grid;
    let geom = LineGeometry {
        point: |i: isize| (grid.center(i), 0.0),
        t: field.t,
        odd: false,
    };
    Ok(pad_line(&field.u, &bc.left, &bc.right, width, &geom))
}
