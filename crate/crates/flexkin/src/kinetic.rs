//! Two- and four-velocity discrete distributions and their moments.
//!
//! The flux kernels in `solver1d` use closed macroscopic forms; this module
//! exists to build and check those forms against the kinetic description.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two-component distribution with velocities (+λ, −λ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticPair {
    pub f_plus: f64,
    pub f_minus: f64,
}

/// Four-component distribution with velocities (−λ,−λ), (λ,−λ), (λ,λ), (−λ,λ).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticQuad {
    pub f: [f64; 4],
}

/// (P f, PΛ f, PΛ² f)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments1D {
    pub u: f64,
    pub flux: f64,
    pub second: f64,
}

/// Viscous part of the discrete distribution with its moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ViscousComponent {
    pub f: KineticPair,
    /// P f_v
    pub density: f64,
    /// PΛ f_v = ν u_x
    pub flux: f64,
    /// PΛ² f_v
    pub second: f64,
    /// PΛ⁺ f_v
    pub split_plus: f64,
    /// PΛ⁻ f_v
    pub split_minus: f64,
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidWaveSpeed(lambda))
    }
}

pub fn equilibrium_1d(u: f64, g: f64, lambda: f64) -> Result<KineticPair> {
    check_lambda(lambda)?;
    let half_u = 0.5 * u;
    let q = g / (2.0 * lambda);
    Ok(KineticPair {
        f_plus: half_u + q,
        f_minus: half_u - q,
    })
}

pub fn moments_1d(f: KineticPair, lambda: f64) -> Moments1D {
    let u = f.f_plus + f.f_minus;
    Moments1D {
        u,
        flux: lambda * f.f_plus - lambda * f.f_minus,
        second: lambda * lambda * u,
    }
}

/// (g⁺, g⁻) = PΛ^± f^eq
pub fn split_macroscopic_flux(u: f64, g: f64, lambda: f64) -> (f64, f64) {
    let half_g = 0.5 * g;
    let half_lu = 0.5 * lambda * u;
    (half_g + half_lu, half_g - half_lu)
}

pub fn chapman_enskog_viscous(nu: f64, du_dx: f64, lambda: f64) -> Result<ViscousComponent> {
    check_lambda(lambda)?;
    let fp = 0.5 * nu * du_dx / lambda;
    let fm = -fp;
    let density = fp + fm;
    Ok(ViscousComponent {
        f: KineticPair {
            f_plus: fp,
            f_minus: fm,
        },
        density,
        flux: lambda * fp - lambda * fm,
        second: lambda * lambda * density,
        split_plus: lambda * fp,
        split_minus: -lambda * fm,
    })
}

/// Signs of (G1, G2) in each of the four equilibrium components.
const QUAD_SIGNS: [(f64, f64); 4] = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)];

pub fn equilibrium_2d(u: f64, g1: f64, g2: f64, lambda: f64) -> Result<KineticQuad> {
    check_lambda(lambda)?;
    let q = 0.25 * u;
    let a = g1 / (4.0 * lambda);
    let b = g2 / (4.0 * lambda);
    let mut f = [0.0; 4];
    for (fi, (s1, s2)) in f.iter_mut().zip(QUAD_SIGNS) {
        *fi = q + s1 * a + s2 * b;
    }
    Ok(KineticQuad { f })
}

/// (P f, PΛ₁ f, PΛ₂ f)
pub fn moments_2d(f: KineticQuad, lambda: f64) -> (f64, f64, f64) {
    let [f1, f2, f3, f4] = f.f;
    (
        (f1 + f3) + (f2 + f4),
        lambda * ((f2 + f3) - (f1 + f4)),
        lambda * ((f3 + f4) - (f1 + f2)),
    )
}

/// Interface flux from upwinding each velocity component: P(Λ⁺f_L + Λ⁻f_R).
pub fn kinetic_kfds_flux(u_l: f64, g_l: f64, u_r: f64, g_r: f64, lambda: f64) -> Result<f64> {
    let fl = equilibrium_1d(u_l, g_l, lambda)?;
    let fr = equilibrium_1d(u_r, g_r, lambda)?;
    Ok(lambda * fl.f_plus - lambda * fr.f_minus)
}

/// Limited flux built component by component from slope ratios of f±.
///
/// Each component blends its upwind flux with its Lax-Wendroff flux using
/// φ(r) = minmod(1, r), where r is the upwind-side ratio of Δf. Zero local
/// jumps give no correction.
pub fn kinetic_tvd_flux(u: [f64; 4], g: [f64; 4], lambda: f64, ratio: f64) -> Result<f64> {
    let mut fp = [0.0; 4];
    let mut fm = [0.0; 4];
    for i in 0..4 {
        let f = equilibrium_1d(u[i], g[i], lambda)?;
        fp[i] = f.f_plus;
        fm[i] = f.f_minus;
    }
    let phi = |r: f64| r.clamp(0.0, 1.0);
    let c = 0.5 * lambda * (1.0 - lambda * ratio);
    let corr = |d_up: f64, d_here: f64| {
        if d_here == 0.0 {
            0.0
        } else {
            phi(d_up / d_here) * c * d_here
        }
    };
    let plus = lambda * fp[1] + corr(fp[1] - fp[0], fp[2] - fp[1]);
    let minus = -lambda * fm[2] + corr(fm[3] - fm[2], fm[2] - fm[1]);
    Ok(plus + minus)
}
