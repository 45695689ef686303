//! Reference solutions for the benchmark problems.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Burgers Riemann problem with the jump at x = 0 at time 0.
pub fn riemann_burgers(u_l: f64, u_r: f64, x: f64, t: f64) -> f64 {
    if t <= 0.0 || u_l == u_r {
        return if x < 0.0 { u_l } else { u_r };
    }
    if u_l > u_r {
        let s = 0.5 * (u_l + u_r);
        if x < s * t {
            u_l
        } else {
            u_r
        }
    } else if x < u_l * t {
        u_l
    } else if x > u_r * t {
        u_r
    } else {
        x / t
    }
}

/// Three-state step 0 / 1 / −1 with jumps at ∓⅓, advected at unit speed.
pub fn linear_advection_profile(x: f64, t: f64) -> f64 {
    let xi = x - t;
    if xi < -1.0 / 3.0 {
        0.0
    } else if xi <= 1.0 / 3.0 {
        1.0
    } else {
        -1.0
    }
}

/// Steady u' = u''/Pe on [0, 1] with u(0) = 0, u(1) = 1.
pub fn advection_diffusion_steady(x: f64, pe: f64) -> Result<f64> {
    if pe == 0.0 || !pe.is_finite() {
        return Err(Error::Evaluation(format!("Peclet number {pe} must be finite and nonzero")));
    }
    Ok(if pe > 0.0 {
        // divide through by e^{Pe}
        ((pe * (x - 1.0)).exp() - (-pe).exp()) / -(-pe).exp_m1()
    } else {
        (pe * x).exp_m1() / pe.exp_m1()
    })
}

/// Travelling viscous front from 1 down to 0 moving at speed ½.
pub fn viscous_front(x: f64, t: f64, nu: f64) -> f64 {
    0.5 * (1.0 + ((0.5 * t - x) / (4.0 * nu)).tanh())
}

/// Modified Bessel function I_n(z) of integer order from its power series.
pub fn bessel_i(n: u32, z: f64) -> f64 {
    let half = 0.5 * z;
    let q = half * half;
    // leading term (z/2)^n / n!
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let mut sum = term;
    let mut k = 0u32;
    loop {
        k += 1;
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term <= sum * 1e-17 || k > 500 {
            break;
        }
    }
    sum
}

/// Default truncation of the decaying-sine series.
pub const SINE_SERIES_TERMS: usize = 60;

/// Viscous Burgers with u(x, 0) = −sin(πx) on [−1, 1], u(±1) = 0.
///
/// Cole-Hopf series with coefficients a_n = (−1)ⁿ I_n(1/(2πν)).
pub fn viscous_sine_series(x: f64, t: f64, nu: f64, n_terms: usize) -> Result<f64> {
    if !(nu > 0.0) || n_terms == 0 {
        return Err(Error::Evaluation("series needs ν > 0 and at least one term".into()));
    }
    let z = 1.0 / (2.0 * PI * nu);
    let scale = bessel_i(0, z);
    let mut num = 0.0;
    let mut den = 1.0;
    for n in 1..=n_terms {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let a = sign * bessel_i(n as u32, z) / scale;
        let e = (-nu * nf * nf * PI * PI * t).exp();
        num += nf * a * e * (nf * PI * x).sin();
        den += 2.0 * a * e * (nf * PI * x).cos();
    }
    if den.abs() < 1e-300 {
        return Err(Error::Evaluation(format!("series denominator vanished at x = {x}")));
    }
    Ok(4.0 * PI * nu * num / den)
}

/// Steady viscous shock between u_L and u_R centred at x = 0.
pub fn viscous_steady_shock(x: f64, nu: f64, u_l: f64, u_r: f64) -> f64 {
    0.5 * ((u_l + u_r) - (u_l - u_r) * (x * (u_l - u_r) / (4.0 * nu)).tanh())
}

/// Steady advection of a diagonal discontinuity at angle φ (radians).
pub fn lce2d_diagonal(x: f64, y: f64, angle: f64) -> f64 {
    let (a, b) = (angle.cos(), angle.sin());
    if b * x - a * y < 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Planar viscous front for u_t + u u_x + u u_y = νΔu.
pub fn burgers2d_front(x: f64, y: f64, t: f64, nu: f64) -> f64 {
    0.5 - ((x + y - t) / (2.0 * nu)).tanh()
}

/// Inviscid Burgers from u(x, 0) = sin(2πx), periodic on [0, 1], before breaking.
///
/// Solves u = sin(2π(x − ut)) by Newton iteration; the residual is strictly
/// increasing in u while 2πt < 1, so bisection on [−1, 1] backs it up.
pub fn burgers_sine(x: f64, t: f64) -> Result<f64> {
    let w = 2.0 * PI;
    if w * t >= 1.0 {
        return Err(Error::Evaluation(format!("t = {t} is past wave breaking")));
    }
    let f = |u: f64| u - (w * (x - u * t)).sin();
    let df = |u: f64| 1.0 + w * t * (w * (x - u * t)).cos();
    let mut u = (w * x).sin();
    for _ in 0..50 {
        let step = f(u) / df(u);
        u -= step;
        if step.abs() < 1e-13 {
            return Ok(u);
        }
    }
    let (mut lo, mut hi) = (-1.0, 1.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Final time of the smooth Burgers convergence study.
pub const SINE_STUDY_TIME: f64 = 0.4 / PI;
