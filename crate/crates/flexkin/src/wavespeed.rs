use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ScalarFlux;

/// Positive floor applied to the global bound so it can divide.
pub const LAMBDA_FLOOR: f64 = 1e-12;

/// Relative jump below which the secant speed is replaced by the tangent.
pub const SECANT_TOL: f64 = 1e-12;

/// How the numerical diffusion speed λ is fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveSpeedMode {
    /// Bound on the characteristic speeds.
    Ce,
    /// Jump (shock) speed per interface.
    Rh,
    /// Jump speed where characteristics converge, characteristic bound elsewhere.
    Hybrid,
}

impl FromStr for WaveSpeedMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ce" => Ok(Self::Ce),
            "rh" => Ok(Self::Rh),
            "hybrid" => Ok(Self::Hybrid),
            _ => Err(Error::Config(format!(
                "unknown wave-speed mode '{s}' (expected ce, rh or hybrid)"
            ))),
        }
    }
}

impl fmt::Display for WaveSpeedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ce => "ce",
            Self::Rh => "rh",
            Self::Hybrid => "hybrid",
        })
    }
}

/// max_j |a(u_j)|, floored at [`LAMBDA_FLOOR`].
pub fn lambda_ce(states: &[f64], flux: ScalarFlux) -> Result<f64> {
    if states.is_empty() {
        return Err(Error::Config("cannot bound wave speed of an empty state".into()));
    }
    Ok(max_speed(states, flux).max(LAMBDA_FLOOR))
}

/// max_j |a(u_j)| without the floor.
pub fn max_speed(states: &[f64], flux: ScalarFlux) -> f64 {
    states.iter().fold(0.0, |m, &u| m.max(flux.a(u).abs()))
}

/// Characteristic bound for a single interface.
#[inline]
pub fn lambda_ce_local(u_l: f64, u_r: f64, flux: ScalarFlux) -> f64 {
    flux.a(u_l).abs().max(flux.a(u_r).abs())
}

/// |Δg/Δu|, or |a(ū)| when the jump is negligible.
#[inline]
pub fn lambda_rh(u_l: f64, u_r: f64, flux: ScalarFlux) -> f64 {
    let du = u_r - u_l;
    if du.abs() <= SECANT_TOL * 1f64.max(u_l.abs()).max(u_r.abs()) {
        flux.a(0.5 * (u_l + u_r)).abs()
    } else {
        flux.divided_difference(u_l, u_r).abs()
    }
}

/// Converging characteristics.
#[inline]
pub fn shock_indicator(a_l: f64, a_r: f64) -> bool {
    a_l > 0.0 && a_r < 0.0
}

/// Hybrid choice: jump speed at flagged interfaces, local bound elsewhere.
#[inline]
pub fn lambda_hybrid(u_l: f64, u_r: f64, flux: ScalarFlux) -> f64 {
    if shock_indicator(flux.a(u_l), flux.a(u_r)) {
        lambda_rh(u_l, u_r, flux)
    } else {
        lambda_ce_local(u_l, u_r, flux)
    }
}

/// Depth below which a cell is treated as dry.
pub const DRY_DEPTH: f64 = 1e-10;

/// Velocity hu/h, zero in dry cells.
#[inline]
pub fn swe_velocity(h: f64, hu: f64) -> f64 {
    if h < DRY_DEPTH {
        0.0
    } else {
        hu / h
    }
}

/// Per-equation λ for the shallow-water system at one interface.
///
/// `left`/`right` are (h, hu). In jump mode the left-state eigenvalue
/// magnitudes are used. Hybrid mode applies the converging-characteristic
/// test to each family separately.
pub fn lambda_swe(
    left: (f64, f64),
    right: (f64, f64),
    gravity: f64,
    mode: WaveSpeedMode,
) -> Result<[f64; 2]> {
    let (hl, hr) = (left.0, right.0);
    if hl < 0.0 || hr < 0.0 {
        return Err(Error::State(format!("negative depth ({hl}, {hr}) at interface")));
    }
    let (ul, ur) = (swe_velocity(hl, left.1), swe_velocity(hr, right.1));
    let (cl, cr) = ((gravity * hl).sqrt(), (gravity * hr).sqrt());
    let ce = (ul - cl).abs().max((ul + cl).abs()).max((ur - cr).abs()).max((ur + cr).abs());
    let rh = [(ul - cl).abs(), (ul + cl).abs()];
    Ok(match mode {
        WaveSpeedMode::Ce => [ce, ce],
        WaveSpeedMode::Rh => rh,
        WaveSpeedMode::Hybrid => [
            if shock_indicator(ul - cl, ur - cr) { rh[0] } else { ce },
            if shock_indicator(ul + cl, ur + cr) { rh[1] } else { ce },
        ],
    })
}
