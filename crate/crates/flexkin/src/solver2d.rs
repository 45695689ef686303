use rayon::prelude::*;

use crate::boundary::{check_pair, pad_line, LineGeometry, Side};
use crate::driver::{first_non_finite, max_abs_diff, Evolve, TimeStep};
use crate::error::{Error, Result};
use crate::field::Field2D;
use crate::grid::Grid2D;
use crate::model::FluxModel;
use crate::solver1d::{check_cfl, interface_flux_kfds, line_fluxes, LineScheme, SchemeKind};
use crate::swe1d::{swe_line_fluxes, swe_max_speed};
use crate::wavespeed::{self, WaveSpeedMode};

/// Boundary rules on the four sides of a rectangle.
#[derive(Debug, Clone, Copy)]
pub struct Boundary2D {
    pub west: Side,
    pub east: Side,
    pub south: Side,
    pub north: Side,
}

impl Boundary2D {
    pub fn uniform(side: Side) -> Self {
        Self {
            west: side,
            east: side,
            south: side,
            north: side,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_pair(&self.west, &self.east)?;
        check_pair(&self.south, &self.north)
    }
}

/// Outward unit normal of an axis-aligned face.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normal {
    PlusX,
    MinusX,
    PlusY,
    MinusY,
}

/// ½(G_n(U_L) + G_n(U_R)) − ½λ(U_R − U_L) for a scalar law; `u_l` is the
/// owning cell and `u_r` its neighbour across the face.
pub fn normal_interface_flux_2d(u_l: f64, u_r: f64, normal: Normal, lambda: f64, model: &FluxModel) -> f64 {
    let (flux, sign) = match normal {
        Normal::PlusX => (model.g1, 1.0),
        Normal::MinusX => (model.g1, -1.0),
        Normal::PlusY => (model.y_flux(), 1.0),
        Normal::MinusY => (model.y_flux(), -1.0),
    };
    interface_flux_kfds(u_l, u_r, sign * flux.g(u_l), sign * flux.g(u_r), lambda)
}

/// Row `k` of component `c` padded along x, and column `j` padded along y.
struct Lines {
    rows: Vec<Vec<f64>>,
    cols: Vec<Vec<f64>>,
}

fn extract_lines(
    field: &Field2D,
    c: usize,
    bc: &Boundary2D,
    odd_x: bool,
    odd_y: bool,
    width: usize,
) -> Lines {
    let g = &field.grid;
    let (nx, ny) = (g.nx(), g.ny());
    let rows = (0..ny)
        .into_par_iter()
        .map(|k| {
            let line: Vec<f64> = (0..nx).map(|j| field.get(j, k, c)).collect();
            let y = g.y.center(k as isize);
            let geom = LineGeometry {
                point: |i: isize| (g.x.center(i), y),
                t: field.t,
                odd: odd_x,
            };
            pad_line(&line, &bc.west, &bc.east, width, &geom)
        })
        .collect();
    let cols = (0..nx)
        .into_par_iter()
        .map(|j| {
            let line: Vec<f64> = (0..ny).map(|k| field.get(j, k, c)).collect();
            let x = g.x.center(j as isize);
            let geom = LineGeometry {
                point: |i: isize| (x, g.y.center(i)),
                t: field.t,
                odd: odd_y,
            };
            pad_line(&line, &bc.south, &bc.north, width, &geom)
        })
        .collect();
    Lines { rows, cols }
}

fn check_grid(grid: &Grid2D) -> Result<()> {
    if grid.nx() < 4 || grid.ny() < 4 {
        return Err(Error::Config("2D grids need at least 4 cells per axis".into()));
    }
    Ok(())
}

fn combined_dt(lx: f64, ly: f64, dx: f64, dy: f64, cfl: f64, nu: f64) -> TimeStep {
    let rate = lx / dx + ly / dy;
    let conv = if rate > 0.0 { cfl / rate } else { f64::INFINITY };
    let visc = if nu > 0.0 {
        0.4 / (nu * (1.0 / (dx * dx) + 1.0 / (dy * dy)))
    } else {
        f64::INFINITY
    };
    let dt = conv.min(visc);
    if dt.is_finite() {
        TimeStep::Finite(dt)
    } else {
        TimeStep::Frozen
    }
}

/// Explicit solver for u_t + g1(u)_x + g2(u)_y = νΔu.
#[derive(Debug, Clone)]
pub struct Solver2D {
    pub model: FluxModel,
    pub scheme: SchemeKind,
    pub mode: WaveSpeedMode,
    pub bc: Boundary2D,
    pub cfl: f64,
}

impl Solver2D {
    pub fn new(model: FluxModel, scheme: SchemeKind, mode: WaveSpeedMode, bc: Boundary2D, cfl: f64) -> Result<Self> {
        scheme.check_mode(mode)?;
        check_cfl(cfl)?;
        bc.validate()?;
        Ok(Self {
            model,
            scheme,
            mode,
            bc,
            cfl,
        })
    }

    /// Directional speed maxima over interior cells and the first ghost layer.
    fn speeds(&self, lines: &Lines) -> (f64, f64) {
        let (f1, f2) = (self.model.g1, self.model.y_flux());
        let mut lx: f64 = 0.0;
        let mut ly: f64 = 0.0;
        for l in lines.rows.iter().chain(&lines.cols) {
            let inner = &l[1..l.len() - 1];
            lx = lx.max(wavespeed::max_speed(inner, f1));
            ly = ly.max(wavespeed::max_speed(inner, f2));
        }
        (lx, ly)
    }

    pub fn step_with(&self, field: &Field2D, dt: f64) -> Result<Field2D> {
        check_grid(&field.grid)?;
        let lines = extract_lines(field, 0, &self.bc, false, false, 2);
        let (lx, ly) = self.speeds(&lines);
        let global = lx.max(ly).max(wavespeed::LAMBDA_FLOOR);
        let g = &field.grid;
        let (dx, dy) = (g.dx(), g.dy());
        let nu = self.model.nu;
        let sx = LineScheme {
            kind: self.scheme,
            mode: self.mode,
            flux: self.model.g1,
            global_lambda: global,
        };
        let sy = LineScheme {
            flux: self.model.y_flux(),
            ..sx
        };
        let fx: Vec<Vec<f64>> = lines.rows.par_iter().map(|p| line_fluxes(p, &sx, dt / dx, nu, dx)).collect();
        let fy: Vec<Vec<f64>> = lines.cols.par_iter().map(|p| line_fluxes(p, &sy, dt / dy, nu, dy)).collect();
        let (nx, ny) = (g.nx(), g.ny());
        let mut data = Vec::with_capacity(nx * ny);
        for k in 0..ny {
            for j in 0..nx {
                let x_part = (fx[k][j + 1] - fx[k][j]) / dx;
                let y_part = (fy[j][k + 1] - fy[j][k]) / dy;
                data.push(field.get(j, k, 0) - dt * (x_part + y_part));
            }
        }
        let t = field.t + dt;
        if let Some(cell) = first_non_finite(&data) {
            return Err(Error::Divergence { cell, t });
        }
        Ok(Field2D {
            grid: field.grid.clone(),
            ncomp: 1,
            data,
            t,
        })
    }
}

impl Evolve for Solver2D {
    type State = Field2D;

    fn time(&self, s: &Field2D) -> f64 {
        s.t
    }

    fn stable_step(&self, s: &Field2D) -> Result<TimeStep> {
        check_grid(&s.grid)?;
        let lines = extract_lines(s, 0, &self.bc, false, false, 1);
        let (lx, ly) = self.speeds(&lines);
        Ok(combined_dt(lx, ly, s.grid.dx(), s.grid.dy(), self.cfl, self.model.nu))
    }

    fn step(&self, s: &Field2D, dt: f64) -> Result<Field2D> {
        self.step_with(s, dt)
    }

    fn change(&self, old: &Field2D, new: &Field2D) -> f64 {
        max_abs_diff(&old.data, &new.data)
    }
}

/// One stable step of the scalar 2D solver.
pub fn advance_2d_scalar(
    field: &Field2D,
    model: FluxModel,
    scheme: SchemeKind,
    mode: WaveSpeedMode,
    bc: Boundary2D,
    cfl: f64,
) -> Result<Field2D> {
    let solver = Solver2D::new(model, scheme, mode, bc, cfl)?;
    match solver.stable_step(field)? {
        TimeStep::Finite(dt) => solver.step_with(field, dt),
        TimeStep::Frozen => Ok(field.clone()),
    }
}

/// Explicit solver for the flat-bed 2D shallow-water system (h, hu, hv).
#[derive(Debug, Clone)]
pub struct SweSolver2D {
    pub scheme: SchemeKind,
    pub mode: WaveSpeedMode,
    pub bc: Boundary2D,
    pub cfl: f64,
    pub gravity: f64,
}

impl SweSolver2D {
    pub fn new(scheme: SchemeKind, mode: WaveSpeedMode, bc: Boundary2D, cfl: f64, gravity: f64) -> Result<Self> {
        scheme.check_mode(mode)?;
        check_cfl(cfl)?;
        bc.validate()?;
        for side in [bc.west, bc.east, bc.south, bc.north] {
            if !matches!(side, Side::Extrapolate | Side::Periodic | Side::Reflect) {
                return Err(Error::Config(format!("boundary {side:?} is not supported for shallow water")));
            }
        }
        Ok(Self {
            scheme,
            mode,
            bc,
            cfl,
            gravity,
        })
    }

    fn all_lines(&self, field: &Field2D, width: usize) -> Result<[Lines; 3]> {
        if field.ncomp != 3 {
            return Err(Error::Config("shallow-water fields carry (h, hu, hv)".into()));
        }
        check_grid(&field.grid)?;
        Ok([
            extract_lines(field, 0, &self.bc, false, false, width),
            extract_lines(field, 1, &self.bc, true, false, width),
            extract_lines(field, 2, &self.bc, false, true, width),
        ])
    }

    fn speeds(&self, l: &[Lines; 3]) -> (f64, f64) {
        let g = self.gravity;
        let trim = |v: &Vec<f64>| v[1..v.len() - 1].to_vec();
        let mut lx: f64 = 0.0;
        let mut ly: f64 = 0.0;
        for k in 0..l[0].rows.len() {
            lx = lx.max(swe_max_speed(&trim(&l[0].rows[k]), &trim(&l[1].rows[k]), g));
            ly = ly.max(swe_max_speed(&trim(&l[0].rows[k]), &trim(&l[2].rows[k]), g));
        }
        for j in 0..l[0].cols.len() {
            lx = lx.max(swe_max_speed(&trim(&l[0].cols[j]), &trim(&l[1].cols[j]), g));
            ly = ly.max(swe_max_speed(&trim(&l[0].cols[j]), &trim(&l[2].cols[j]), g));
        }
        (lx, ly)
    }

    pub fn step_with(&self, field: &Field2D, dt: f64) -> Result<Field2D> {
        let l = self.all_lines(field, 2)?;
        let grid = &field.grid;
        let (dx, dy) = (grid.dx(), grid.dy());
        let (nx, ny) = (grid.nx(), grid.ny());
        let g = self.gravity;
        let fx: Vec<Vec<[f64; 3]>> = (0..ny)
            .into_par_iter()
            .map(|k| swe_line_fluxes(&l[0].rows[k], &l[1].rows[k], Some(&l[2].rows[k]), g, self.scheme, self.mode, dt / dx))
            .collect::<Result<_>>()?;
        let fy: Vec<Vec<[f64; 3]>> = (0..nx)
            .into_par_iter()
            .map(|j| swe_line_fluxes(&l[0].cols[j], &l[2].cols[j], Some(&l[1].cols[j]), g, self.scheme, self.mode, dt / dy))
            .collect::<Result<_>>()?;
        // y-line components come back as (h, hv, hu)
        const Y_COMP: [usize; 3] = [0, 2, 1];
        let mut data = Vec::with_capacity(nx * ny * 3);
        for k in 0..ny {
            for j in 0..nx {
                for c in 0..3 {
                    let x_part = (fx[k][j + 1][c] - fx[k][j][c]) / dx;
                    let cy = Y_COMP[c];
                    let y_part = (fy[j][k + 1][cy] - fy[j][k][cy]) / dy;
                    data.push(field.get(j, k, c) - dt * (x_part + y_part));
                }
            }
        }
        let t = field.t + dt;
        if let Some(i) = first_non_finite(&data) {
            return Err(Error::Divergence { cell: i / 3, t });
        }
        if let Some(cell) = (0..nx * ny).find(|&i| data[3 * i] < 0.0) {
            return Err(Error::Positivity { cell, t, h: data[3 * cell] });
        }
        Ok(Field2D {
            grid: field.grid.clone(),
            ncomp: 3,
            data,
            t,
        })
    }
}

impl Evolve for SweSolver2D {
    type State = Field2D;

    fn time(&self, s: &Field2D) -> f64 {
        s.t
    }

    fn stable_step(&self, s: &Field2D) -> Result<TimeStep> {
        let l = self.all_lines(s, 1)?;
        let (lx, ly) = self.speeds(&l);
        Ok(combined_dt(lx, ly, s.grid.dx(), s.grid.dy(), self.cfl, 0.0))
    }

    fn step(&self, s: &Field2D, dt: f64) -> Result<Field2D> {
        self.step_with(s, dt)
    }

    fn change(&self, old: &Field2D, new: &Field2D) -> f64 {
        max_abs_diff(&old.data, &new.data)
    }
}

/// One stable step of the 2D shallow-water solver.
pub fn advance_2d_swe(field: &Field2D, solver: &SweSolver2D) -> Result<Field2D> {
    match solver.stable_step(field)? {
        TimeStep::Finite(dt) => solver.step_with(field, dt),
        TimeStep::Frozen => Ok(field.clone()),
    }
}
