use serde::{Deserialize, Serialize};

use crate::boundary::{check_pair, pad_line, BoundaryCondition, LineGeometry, Side};
use crate::driver::{first_non_finite, max_abs_diff, Evolve, TimeStep};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::solver1d::{
    check_cfl, interface_flux_kfds, interface_flux_klw, interface_flux_tvd_with, stable_dt,
    SchemeKind,
};
use crate::wavespeed::{lambda_swe, shock_indicator, swe_velocity, WaveSpeedMode};

pub const GRAVITY: f64 = 9.81;

/// Depth floor in the momentum flux denominator.
pub const DEPTH_FLOOR: f64 = 1e-12;

/// Depth, discharge and bed elevation at cell centres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweState {
    pub grid: Grid1D,
    pub h: Vec<f64>,
    pub hu: Vec<f64>,
    pub bed: Vec<f64>,
    pub gravity: f64,
    pub t: f64,
}

impl SweState {
    pub fn new(grid: Grid1D, h: Vec<f64>, hu: Vec<f64>, bed: Vec<f64>, gravity: f64) -> Result<Self> {
        let n = grid.n_cells;
        if h.len() != n || hu.len() != n || bed.len() != n {
            return Err(Error::Config("depth, discharge and bed must match the grid".into()));
        }
        if let Some(j) = h.iter().position(|&v| !(v >= 0.0)) {
            return Err(Error::State(format!("depth {} at cell {j} is negative", h[j])));
        }
        Ok(Self {
            grid,
            h,
            hu,
            bed,
            gravity,
            t: 0.0,
        })
    }

    /// Bed elevation at interior interfaces j+½, j = 0..n−2.
    pub fn interface_bed(&self) -> Vec<f64> {
        self.bed.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    pub fn velocity(&self) -> Vec<f64> {
        self.h.iter().zip(&self.hu).map(|(&h, &q)| swe_velocity(h, q)).collect()
    }

    pub fn mass(&self) -> f64 {
        self.h.iter().sum::<f64>() * self.grid.dx
    }
}

/// (hu, hu²/h + ½gh²)
pub fn swe_physical_flux(h: f64, hu: f64, gravity: f64) -> Result<(f64, f64)> {
    if h < 0.0 {
        return Err(Error::State(format!("negative depth {h}")));
    }
    Ok((hu, momentum_flux(h, hu, gravity)))
}

#[inline]
fn momentum_flux(h: f64, q: f64, gravity: f64) -> f64 {
    let adv = if h < crate::wavespeed::DRY_DEPTH {
        0.0
    } else {
        q * q / h.max(DEPTH_FLOOR)
    };
    adv + 0.5 * gravity * h * h
}

/// Momentum source −g·h̄·(b_{j+½} − b_{j−½})/Δx with h̄ the mean of the two interface depths.
pub fn well_balanced_source(h_minus: f64, h_plus: f64, b_jump: f64, gravity: f64, dx: f64) -> f64 {
    -gravity * 0.5 * (h_minus + h_plus) * b_jump / dx
}

/// Net interface fluxes of the shallow-water system along one line.
///
/// Inputs carry two ghosts per side. `qt`, when present, is the momentum
/// tangential to the line and is advected passively. Returns `n + 1`
/// interface fluxes of (h, normal momentum, tangential momentum).
pub(crate) fn swe_line_fluxes(
    h: &[f64],
    qn: &[f64],
    qt: Option<&[f64]>,
    gravity: f64,
    kind: SchemeKind,
    mode: WaveSpeedMode,
    ratio: f64,
) -> Result<Vec<[f64; 3]>> {
    let len = h.len();
    let n = len - 4;
    let zeros;
    let qt = match qt {
        Some(q) => q,
        None => {
            zeros = vec![0.0; len];
            &zeros[..]
        }
    };
    let vel: Vec<f64> = (0..len).map(|i| swe_velocity(h[i], qn[i])).collect();
    let cons: [&[f64]; 3] = [h, qn, qt];
    let mut flux = [vec![0.0; len], vec![0.0; len], vec![0.0; len]];
    for i in 0..len {
        flux[0][i] = qn[i];
        flux[1][i] = momentum_flux(h[i], qn[i], gravity);
        flux[2][i] = qt[i] * vel[i];
    }
    let mut lam = Vec::with_capacity(len - 1);
    for m in 0..len - 1 {
        let [l1, l2] = lambda_swe((h[m], qn[m]), (h[m + 1], qn[m + 1]), gravity, mode)?;
        let (ul, ur) = (vel[m], vel[m + 1]);
        let ce = l1.max(l2).max(ul.abs()).max(ur.abs());
        let l3 = match mode {
            WaveSpeedMode::Ce => ce,
            WaveSpeedMode::Rh => ul.abs(),
            WaveSpeedMode::Hybrid => {
                if shock_indicator(ul, ur) {
                    ul.abs()
                } else {
                    ce
                }
            }
        };
        lam.push([l1, l2, l3]);
    }
    let mut out = vec![[0.0; 3]; n + 1];
    for (k, o) in out.iter_mut().enumerate() {
        let m = k + 1;
        for c in 0..3 {
            let u = cons[c];
            let g = &flux[c];
            o[c] = match kind {
                SchemeKind::Kfds | SchemeKind::KfdsPlus => {
                    interface_flux_kfds(u[m], u[m + 1], g[m], g[m + 1], lam[m][c])
                }
                SchemeKind::Klw => {
                    interface_flux_klw(u[m], u[m + 1], g[m], g[m + 1], lam[m][c], ratio)
                }
                SchemeKind::TvdKfds | SchemeKind::TvdKfdsPlus => interface_flux_tvd_with(
                    [u[m - 1], u[m], u[m + 1], u[m + 2]],
                    [g[m - 1], g[m], g[m + 1], g[m + 2]],
                    [lam[m - 1][c], lam[m][c], lam[m + 1][c]],
                    ratio,
                ),
            };
        }
    }
    Ok(out)
}

/// max(|u| + √(gh)) over the given cells.
pub(crate) fn swe_max_speed(h: &[f64], q: &[f64], gravity: f64) -> f64 {
    h.iter()
        .zip(q)
        .fold(0.0, |m, (&h, &q)| m.max(swe_velocity(h, q).abs() + (gravity * h.max(0.0)).sqrt()))
}

/// Explicit shallow-water solver with well-balanced bed source.
#[derive(Debug, Clone)]
pub struct SweSolver1D {
    pub scheme: SchemeKind,
    pub mode: WaveSpeedMode,
    pub bc: BoundaryCondition,
    pub cfl: f64,
}

impl SweSolver1D {
    pub fn new(scheme: SchemeKind, mode: WaveSpeedMode, bc: BoundaryCondition, cfl: f64) -> Result<Self> {
        scheme.check_mode(mode)?;
        check_cfl(cfl)?;
        check_pair(&bc.left, &bc.right)?;
        for side in [bc.left, bc.right] {
            if !matches!(side, Side::Extrapolate | Side::Periodic | Side::Reflect) {
                return Err(Error::Config(format!("boundary {side:?} is not supported for shallow water")));
            }
        }
        Ok(Self {
            scheme,
            mode,
            bc,
            cfl,
        })
    }

    fn padded(&self, s: &SweState, width: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        let grid = &s.grid;
        let geom = |odd| LineGeometry {
            point: |i: isize| (grid.center(i), 0.0),
            t: s.t,
            odd,
        };
        let h = pad_line(&s.h, &self.bc.left, &self.bc.right, width, &geom(false));
        let q = pad_line(&s.hu, &self.bc.left, &self.bc.right, width, &geom(true));
        let bed_side = |side: &Side| if side.is_periodic() { Side::Periodic } else { Side::Extrapolate };
        let b = pad_line(&s.bed, &bed_side(&self.bc.left), &bed_side(&self.bc.right), width, &geom(false));
        (h, q, b)
    }

    pub fn max_speed(&self, s: &SweState) -> f64 {
        let (h, q, _) = self.padded(s, 1);
        swe_max_speed(&h, &q, s.gravity)
    }

    pub fn step_with(&self, s: &SweState, dt: f64) -> Result<SweState> {
        let (h, q, b) = self.padded(s, 2);
        let dx = s.grid.dx;
        let f = swe_line_fluxes(&h, &q, None, s.gravity, self.scheme, self.mode, dt / dx)?;
        let n = s.grid.n_cells;
        let t = s.t + dt;
        let mut hn = Vec::with_capacity(n);
        let mut qn = Vec::with_capacity(n);
        for j in 0..n {
            let p = j + 2;
            let b_jump = 0.5 * (b[p + 1] - b[p - 1]);
            let src = well_balanced_source(0.5 * (h[p - 1] + h[p]), 0.5 * (h[p] + h[p + 1]), b_jump, s.gravity, dx);
            let hj = s.h[j] - dt * ((f[j + 1][0] - f[j][0]) / dx);
            let qj = s.hu[j] - dt * ((f[j + 1][1] - f[j][1]) / dx) + dt * src;
            hn.push(hj);
            qn.push(qj);
        }
        if let Some(cell) = first_non_finite(&hn).or_else(|| first_non_finite(&qn)) {
            return Err(Error::Divergence { cell, t });
        }
        if let Some(cell) = hn.iter().position(|&v| v < 0.0) {
            return Err(Error::Positivity { cell, t, h: hn[cell] });
        }
        Ok(SweState {
            grid: s.grid.clone(),
            h: hn,
            hu: qn,
            bed: s.bed.clone(),
            gravity: s.gravity,
            t,
        })
    }
}

impl Evolve for SweSolver1D {
    type State = SweState;

    fn time(&self, s: &SweState) -> f64 {
        s.t
    }

    fn stable_step(&self, s: &SweState) -> Result<TimeStep> {
        stable_dt(self.max_speed(s), s.grid.dx, self.cfl, 0.0)
    }

    fn step(&self, s: &SweState, dt: f64) -> Result<SweState> {
        self.step_with(s, dt)
    }

    fn change(&self, old: &SweState, new: &SweState) -> f64 {
        max_abs_diff(&old.h, &new.h).max(max_abs_diff(&old.hu, &new.hu))
    }
}

/// One stable step of the shallow-water solver.
pub fn advance_swe(
    state: &SweState,
    scheme: SchemeKind,
    bc: BoundaryCondition,
    mode: WaveSpeedMode,
    cfl: f64,
) -> Result<SweState> {
    let solver = SweSolver1D::new(scheme, mode, bc, cfl)?;
    match solver.stable_step(state)? {
        TimeStep::Finite(dt) => solver.step_with(state, dt),
        TimeStep::Frozen => Ok(state.clone()),
    }
}

/// Max |u| after `steps` steps from a lake at rest with free surface `level`.
pub fn lake_at_rest_residual(
    grid: &Grid1D,
    bed: impl Fn(f64) -> f64,
    level: f64,
    scheme: SchemeKind,
    steps: usize,
) -> Result<f64> {
    let b: Vec<f64> = grid.centers().into_iter().map(bed).collect();
    let h: Vec<f64> = b.iter().map(|&b| level - b).collect();
    let mut s = SweState::new(grid.clone(), h, vec![0.0; grid.n_cells], b, GRAVITY)?;
    let solver = SweSolver1D::new(scheme, scheme.default_mode(), BoundaryCondition::extrapolate(), 0.8)?;
    for _ in 0..steps {
        s = advance_swe(&s, solver.scheme, solver.bc, solver.mode, solver.cfl)?;
    }
    Ok(s.velocity().iter().fold(0.0, |m, v| m.max(v.abs())))
}
