//! Error norms, experimental orders of convergence and grid studies.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::cases::{case, CaseId, Problem};
use crate::error::{Error, Result};
use crate::field::Field2D;
use crate::runner::{simulate_scalar_1d, StopOptions};
use crate::solver1d::SchemeKind;
use crate::wavespeed::WaveSpeedMode;

/// Grids of the desk-scale study.
pub const DEFAULT_GRIDS: [usize; 7] = [20, 40, 80, 160, 320, 640, 1280];

/// (L1, L2) with L1 = h·Σ|e| and L2 = sqrt(h·Σe²) for cell measure h.
pub fn error_norms(numerical: &[f64], analytical: &[f64], cell: f64) -> Result<(f64, f64)> {
    if numerical.len() != analytical.len() {
        return Err(Error::Harness(format!(
            "norm of fields with {} and {} values",
            numerical.len(),
            analytical.len()
        )));
    }
    let (s1, s2) = numerical
        .iter()
        .zip(analytical)
        .fold((0.0, 0.0), |(a, b), (n, e)| {
            let d = n - e;
            (a + d.abs(), b + d * d)
        });
    Ok((cell * s1, (cell * s2).sqrt()))
}

/// Pairwise order between two successive grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Eoc {
    Order(f64),
    /// The finer error vanished; no order can be formed.
    Exact,
}

impl Eoc {
    pub fn value(self) -> Option<f64> {
        match self {
            Eoc::Order(p) => Some(p),
            Eoc::Exact => None,
        }
    }
}

impl fmt::Display for Eoc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Eoc::Order(p) => write!(f, "{p:.3}"),
            Eoc::Exact => f.write_str("exact"),
        }
    }
}

impl Serialize for Eoc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Eoc::Order(p) => s.serialize_f64(*p),
            Eoc::Exact => s.serialize_str("exact"),
        }
    }
}

/// log₂(coarse / fine).
pub fn eoc(coarse: f64, fine: f64) -> Result<Eoc> {
    if !(coarse >= 0.0 && fine >= 0.0) || !coarse.is_finite() || !fine.is_finite() {
        return Err(Error::Harness(format!("order from errors {coarse} and {fine}")));
    }
    if coarse == 0.0 || fine == 0.0 {
        return Ok(Eoc::Exact);
    }
    Ok(Eoc::Order((coarse / fine).log2()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridError {
    pub n_cells: usize,
    pub dx: f64,
    pub l1: f64,
    pub l2: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub case: CaseId,
    pub scheme: SchemeKind,
    pub mode: WaveSpeedMode,
    pub rows: Vec<GridError>,
    pub l1_eoc: Vec<Eoc>,
    pub l2_eoc: Vec<Eoc>,
    /// Why the study stopped early; rows hold the grids finished before it.
    pub failure: Option<String>,
}

impl ConvergenceReport {
    pub fn terminal_l1_eoc(&self) -> Option<Eoc> {
        self.l1_eoc.last().copied()
    }

    pub fn terminal_l2_eoc(&self) -> Option<Eoc> {
        self.l2_eoc.last().copied()
    }

    fn from_rows(case: CaseId, scheme: SchemeKind, mode: WaveSpeedMode, rows: Vec<GridError>) -> Result<Self> {
        let pairs = |f: fn(&GridError) -> f64| -> Result<Vec<Eoc>> {
            rows.windows(2).map(|w| eoc(f(&w[0]), f(&w[1]))).collect()
        };
        Ok(Self {
            case,
            scheme,
            mode,
            l1_eoc: pairs(|r| r.l1)?,
            l2_eoc: pairs(|r| r.l2)?,
            rows,
            failure: None,
        })
    }
}

fn check_grids(grids: &[usize]) -> Result<()> {
    if grids.len() < 2 {
        return Err(Error::Harness("a study needs at least two grids".into()));
    }
    if grids.windows(2).any(|w| w[1] != 2 * w[0]) {
        return Err(Error::Harness(format!("grids must double: {grids:?}")));
    }
    Ok(())
}

/// Runs `case` on each grid (concurrently) and tabulates norms against its oracle.
pub fn convergence_study(
    id: CaseId,
    scheme: SchemeKind,
    mode: WaveSpeedMode,
    grids: &[usize],
    cfl: f64,
) -> Result<ConvergenceReport> {
    check_grids(grids)?;
    let c = case(id);
    let Problem::Scalar1D(setup) = c.problem else {
        return Err(Error::Harness(format!("{id} is not a one-dimensional scalar case")));
    };
    if setup.exact.is_none() {
        return Err(Error::Harness(format!("{id} has no exact solution")));
    }
    scheme.check_mode(mode)?;
    let opts = StopOptions::default();
    let results: Vec<Result<GridError>> = grids
        .par_iter()
        .map(|&n| {
            let run = simulate_scalar_1d(&setup, n, scheme, mode, cfl, None, &opts)?;
            let exact = run.exact.as_ref().expect("oracle present");
            let (l1, l2) = error_norms(&run.field.u, exact, run.field.grid.dx)?;
            Ok(GridError {
                n_cells: n,
                dx: run.field.grid.dx,
                l1,
                l2,
            })
        })
        .collect();
    let mut rows = Vec::new();
    let mut failure = None;
    for (n, r) in grids.iter().zip(results) {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => {
                failure = Some(format!("{n} cells: {e}"));
                break;
            }
        }
    }
    let mut report = ConvergenceReport::from_rows(id, scheme, mode, rows)?;
    report.failure = failure;
    Ok(report)
}

/// Per row, the x position where the field crosses `level` (first crossing from the west).
pub fn row_crossings(field: &Field2D, comp: usize, level: f64) -> Vec<(f64, Option<f64>)> {
    let g = &field.grid;
    (0..g.ny())
        .map(|k| {
            let y = g.y.center(k as isize);
            let hit = (0..g.nx() - 1).find_map(|j| {
                let (a, b) = (field.get(j, k, comp) - level, field.get(j + 1, k, comp) - level);
                if a == 0.0 {
                    Some(g.x.center(j as isize))
                } else if a * b < 0.0 || b == 0.0 {
                    let s = a / (a - b);
                    Some(g.x.center(j as isize) + s * g.dx())
                } else {
                    None
                }
            });
            (y, hit)
        })
        .collect()
}

/// Largest mismatch of one component under the mirrors x ↦ −x, y ↦ −y and the diagonal swap.
/// `odd_x` / `odd_y` flip the sign under the respective mirror (momenta).
pub fn mirror_defect(field: &Field2D, comp: usize, odd_x: bool, odd_y: bool) -> f64 {
    let g = &field.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let sx = if odd_x { -1.0 } else { 1.0 };
    let sy = if odd_y { -1.0 } else { 1.0 };
    let mut worst: f64 = 0.0;
    for k in 0..ny {
        for j in 0..nx {
            let v = field.get(j, k, comp);
            worst = worst.max((v - sx * field.get(nx - 1 - j, k, comp)).abs());
            worst = worst.max((v - sy * field.get(j, ny - 1 - k, comp)).abs());
        }
    }
    worst
}

/// max |h(j,k) − h(k,j)| and, for the momenta, |hu(j,k) − hv(k,j)|.
pub fn diagonal_defect(field: &Field2D) -> f64 {
    let g = &field.grid;
    if g.nx() != g.ny() {
        return f64::INFINITY;
    }
    let n = g.nx();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for j in 0..n {
            worst = worst.max((field.get(j, k, 0) - field.get(k, j, 0)).abs());
            if field.ncomp == 3 {
                worst = worst.max((field.get(j, k, 1) - field.get(k, j, 2)).abs());
            }
        }
    }
    worst
}
