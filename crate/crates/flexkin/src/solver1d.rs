use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boundary::{pad_with_ghosts, BoundaryCondition};
use crate::driver::{first_non_finite, max_abs_diff, Evolve, RunLog, Stop, TimeStep};
use crate::error::{Error, Result};
use crate::field::ScalarField1D;
use crate::model::{FluxModel, ScalarFlux};
use crate::wavespeed::{self, WaveSpeedMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeKind {
    #[serde(rename = "kfds")]
    Kfds,
    #[serde(rename = "kfds+")]
    KfdsPlus,
    #[serde(rename = "klw")]
    Klw,
    #[serde(rename = "tvd")]
    TvdKfds,
    #[serde(rename = "tvd+")]
    TvdKfdsPlus,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::Kfds,
        SchemeKind::KfdsPlus,
        SchemeKind::Klw,
        SchemeKind::TvdKfds,
        SchemeKind::TvdKfdsPlus,
    ];

    pub fn default_mode(self) -> WaveSpeedMode {
        match self {
            SchemeKind::KfdsPlus | SchemeKind::TvdKfdsPlus => WaveSpeedMode::Rh,
            _ => WaveSpeedMode::Ce,
        }
    }

    /// Jump-speed schemes take `rh` or `hybrid`; the others `ce` or `hybrid`.
    pub fn check_mode(self, mode: WaveSpeedMode) -> Result<()> {
        let plus = matches!(self, SchemeKind::KfdsPlus | SchemeKind::TvdKfdsPlus);
        let ok = match mode {
            WaveSpeedMode::Hybrid => true,
            WaveSpeedMode::Rh => plus,
            WaveSpeedMode::Ce => !plus,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!(
                "scheme {self} cannot use wave-speed mode {mode}"
            )))
        }
    }

    pub fn is_limited(self) -> bool {
        matches!(self, SchemeKind::TvdKfds | SchemeKind::TvdKfdsPlus)
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "kfds" => Ok(Self::Kfds),
            "kfds+" => Ok(Self::KfdsPlus),
            "klw" => Ok(Self::Klw),
            "tvd" | "tvd-kfds" => Ok(Self::TvdKfds),
            "tvd+" | "tvd-kfds+" => Ok(Self::TvdKfdsPlus),
            _ => Err(Error::Config(format!(
                "unknown scheme '{s}' (expected kfds, kfds+, klw, tvd or tvd+)"
            ))),
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Kfds => "kfds",
            Self::KfdsPlus => "kfds+",
            Self::Klw => "klw",
            Self::TvdKfds => "tvd",
            Self::TvdKfdsPlus => "tvd+",
        })
    }
}

/// Smaller-magnitude argument when signs agree, else zero. Ties return `a`.
#[inline]
pub fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() <= b.abs() {
        a
    } else {
        b
    }
}

#[inline]
pub fn interface_flux_kfds(u_l: f64, u_r: f64, g_l: f64, g_r: f64, lambda: f64) -> f64 {
    0.5 * (g_l + g_r) - 0.5 * lambda * (u_r - u_l)
}

#[inline]
pub fn interface_flux_klw(u_l: f64, u_r: f64, g_l: f64, g_r: f64, lambda: f64, ratio: f64) -> f64 {
    0.5 * (g_l + g_r) - 0.5 * lambda * lambda * ratio * (u_r - u_l)
}

/// Limited flux at j+½ from values and fluxes at j−1..j+2.
pub fn interface_flux_tvd(u: [f64; 4], g: [f64; 4], lambda: f64, ratio: f64) -> f64 {
    interface_flux_tvd_with(u, g, [lambda; 3], ratio)
}

/// As [`interface_flux_tvd`] with λ given separately at j−½, j+½, j+3/2.
///
/// Each velocity component of the upwind flux is corrected towards its
/// Lax-Wendroff value by a minmod of its own jumps at the interface and
/// at the upwind neighbour for that component. In macroscopic variables
/// the component jump is C± = ¼(1 − λΔt/Δx)(λΔu ± Δg).
pub fn interface_flux_tvd_with(u: [f64; 4], g: [f64; 4], lambda: [f64; 3], ratio: f64) -> f64 {
    let jump = |i: usize, sign: f64| {
        let l = lambda[i];
        0.25 * (1.0 - l * ratio) * (l * (u[i + 1] - u[i]) + sign * (g[i + 1] - g[i]))
    };
    let base = interface_flux_kfds(u[1], u[2], g[1], g[2], lambda[1]);
    base + minmod(jump(1, 1.0), jump(0, 1.0)) + minmod(jump(1, -1.0), jump(2, -1.0))
}

#[inline]
pub fn viscous_interface_flux(gv_l: f64, gv_r: f64) -> f64 {
    0.5 * (gv_l + gv_r)
}

/// Bound from the convective speed and, for ν > 0, the explicit diffusion limit.
pub fn stable_dt(lambda_max: f64, dx: f64, cfl: f64, nu: f64) -> Result<TimeStep> {
    if !(dx > 0.0) {
        return Err(Error::Config(format!("cell width {dx} must be positive")));
    }
    check_cfl(cfl)?;
    let conv = if lambda_max > 0.0 {
        cfl * dx / lambda_max
    } else {
        f64::INFINITY
    };
    let visc = if nu > 0.0 {
        0.4 * dx * dx / nu
    } else {
        f64::INFINITY
    };
    let dt = conv.min(visc);
    Ok(if dt.is_finite() {
        TimeStep::Finite(dt)
    } else {
        TimeStep::Frozen
    })
}

pub fn check_cfl(cfl: f64) -> Result<()> {
    if cfl > 0.0 && cfl <= 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("CFL number {cfl} outside (0, 1]")))
    }
}

/// λ selection for one scheme along a grid line.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LineScheme {
    pub kind: SchemeKind,
    pub mode: WaveSpeedMode,
    pub flux: ScalarFlux,
    /// Characteristic bound over the whole state, used by the upwind
    /// scheme in `ce` mode.
    pub global_lambda: f64,
}

impl LineScheme {
    #[inline]
    fn pair_lambda(&self, u_l: f64, u_r: f64) -> f64 {
        match self.mode {
            WaveSpeedMode::Ce => match self.kind {
                SchemeKind::Kfds | SchemeKind::KfdsPlus => self.global_lambda,
                _ => wavespeed::lambda_ce_local(u_l, u_r, self.flux),
            },
            WaveSpeedMode::Rh => wavespeed::lambda_rh(u_l, u_r, self.flux),
            WaveSpeedMode::Hybrid => wavespeed::lambda_hybrid(u_l, u_r, self.flux),
        }
    }
}

/// Net interface fluxes (convective minus diffusive) along a line padded
/// with two ghost cells per side. Returns `n + 1` values, interface `k`
/// lying between interior cells `k − 1` and `k`.
pub(crate) fn line_fluxes(p: &[f64], s: &LineScheme, ratio: f64, nu: f64, h: f64) -> Vec<f64> {
    let n = p.len() - 4;
    let g: Vec<f64> = p.iter().map(|&u| s.flux.g(u)).collect();
    let lam: Vec<f64> = p.windows(2).map(|w| s.pair_lambda(w[0], w[1])).collect();
    let gv = |i: usize| nu * (p[i + 1] - p[i - 1]) / (2.0 * h);
    (0..=n)
        .map(|k| {
            let m = k + 1;
            let conv = match s.kind {
                SchemeKind::Kfds | SchemeKind::KfdsPlus => {
                    interface_flux_kfds(p[m], p[m + 1], g[m], g[m + 1], lam[m])
                }
                SchemeKind::Klw => interface_flux_klw(p[m], p[m + 1], g[m], g[m + 1], lam[m], ratio),
                SchemeKind::TvdKfds | SchemeKind::TvdKfdsPlus => interface_flux_tvd_with(
                    [p[m - 1], p[m], p[m + 1], p[m + 2]],
                    [g[m - 1], g[m], g[m + 1], g[m + 2]],
                    [lam[m - 1], lam[m], lam[m + 1]],
                    ratio,
                ),
            };
            if nu > 0.0 {
                conv - viscous_interface_flux(gv(m), gv(m + 1))
            } else {
                conv
            }
        })
        .collect()
}

/// Explicit solver for a 1D scalar law.
#[derive(Debug, Clone)]
pub struct Solver1D {
    pub model: FluxModel,
    pub scheme: SchemeKind,
    pub mode: WaveSpeedMode,
    pub bc: BoundaryCondition,
    pub cfl: f64,
}

impl Solver1D {
    pub fn new(
        model: FluxModel,
        scheme: SchemeKind,
        mode: WaveSpeedMode,
        bc: BoundaryCondition,
        cfl: f64,
    ) -> Result<Self> {
        scheme.check_mode(mode)?;
        check_cfl(cfl)?;
        crate::boundary::check_pair(&bc.left, &bc.right)?;
        Ok(Self {
            model,
            scheme,
            mode,
            bc,
            cfl,
        })
    }

    /// Largest |a| over interior cells and the first ghost layer.
    pub fn max_speed(&self, field: &ScalarField1D) -> Result<f64> {
        let p = pad_with_ghosts(field, &self.bc, 1)?;
        Ok(wavespeed::max_speed(&p, self.model.g1))
    }

    /// One step of length `dt`; `dt` is not checked against the stability bound.
    pub fn step_with(&self, field: &ScalarField1D, dt: f64) -> Result<ScalarField1D> {
        let p = pad_with_ghosts(field, &self.bc, 2)?;
        let h = field.grid.dx;
        let global = wavespeed::lambda_ce(&p[1..p.len() - 1], self.model.g1)?;
        let ls = LineScheme {
            kind: self.scheme,
            mode: self.mode,
            flux: self.model.g1,
            global_lambda: global,
        };
        let f = line_fluxes(&p, &ls, dt / h, self.model.nu, h);
        let u: Vec<f64> = field
            .u
            .iter()
            .enumerate()
            .map(|(j, &uj)| uj - dt * ((f[j + 1] - f[j]) / h))
            .collect();
        let t = field.t + dt;
        if let Some(cell) = first_non_finite(&u) {
            return Err(Error::Divergence { cell, t });
        }
        Ok(ScalarField1D {
            grid: field.grid.clone(),
            u,
            t,
        })
    }
}

impl Evolve for Solver1D {
    type State = ScalarField1D;

    fn time(&self, s: &ScalarField1D) -> f64 {
        s.t
    }

    fn stable_step(&self, s: &ScalarField1D) -> Result<TimeStep> {
        stable_dt(self.max_speed(s)?, s.grid.dx, self.cfl, self.model.nu)
    }

    fn step(&self, s: &ScalarField1D, dt: f64) -> Result<ScalarField1D> {
        self.step_with(s, dt)
    }

    fn change(&self, old: &ScalarField1D, new: &ScalarField1D) -> f64 {
        max_abs_diff(&old.u, &new.u)
    }
}

/// One stable step, clipped so that it does not pass `t_limit`.
pub fn advance(
    field: &ScalarField1D,
    model: FluxModel,
    scheme: SchemeKind,
    bc: BoundaryCondition,
    mode: WaveSpeedMode,
    cfl: f64,
    t_limit: Option<f64>,
) -> Result<ScalarField1D> {
    let solver = Solver1D::new(model, scheme, mode, bc, cfl)?;
    match solver.stable_step(field)? {
        TimeStep::Frozen => Ok(field.clone()),
        TimeStep::Finite(mut dt) => {
            if let Some(tl) = t_limit {
                dt = dt.min(tl - field.t);
                if dt <= 0.0 {
                    return Ok(field.clone());
                }
            }
            solver.step_with(field, dt)
        }
    }
}

pub fn run_to_time(
    solver: &Solver1D,
    initial: ScalarField1D,
    stop: Stop,
) -> Result<(ScalarField1D, RunLog)> {
    solver.run(initial, stop)
}
