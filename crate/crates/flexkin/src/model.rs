use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Flux function of a scalar conservation law along one axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScalarFlux {
    /// g(u) = c·u
    Linear(f64),
    /// g(u) = u²/2
    Burgers,
}

impl ScalarFlux {
    #[inline]
    pub fn g(&self, u: f64) -> f64 {
        match *self {
            ScalarFlux::Linear(c) => c * u,
            ScalarFlux::Burgers => 0.5 * u * u,
        }
    }

    /// Characteristic speed dg/du.
    #[inline]
    pub fn a(&self, u: f64) -> f64 {
        match *self {
            ScalarFlux::Linear(c) => c,
            ScalarFlux::Burgers => u,
        }
    }

    /// (g(b) − g(a))/(b − a) in a form free of cancellation; a(a) when a = b.
    #[inline]
    pub fn divided_difference(&self, a: f64, b: f64) -> f64 {
        match *self {
            ScalarFlux::Linear(c) => c,
            ScalarFlux::Burgers => 0.5 * (a + b),
        }
    }
}

/// Scalar convection-diffusion law u_t + g1(u)_x [+ g2(u)_y] = ν Δu.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxModel {
    pub g1: ScalarFlux,
    pub g2: Option<ScalarFlux>,
    pub nu: f64,
}

impl FluxModel {
    pub fn new(g1: ScalarFlux, nu: f64) -> Result<Self> {
        Self::check_nu(nu)?;
        Ok(Self { g1, g2: None, nu })
    }

    pub fn new_2d(g1: ScalarFlux, g2: ScalarFlux, nu: f64) -> Result<Self> {
        Self::check_nu(nu)?;
        Ok(Self {
            g1,
            g2: Some(g2),
            nu,
        })
    }

    pub fn linear(c: f64) -> Self {
        Self {
            g1: ScalarFlux::Linear(c),
            g2: None,
            nu: 0.0,
        }
    }

    pub fn burgers() -> Self {
        Self {
            g1: ScalarFlux::Burgers,
            g2: None,
            nu: 0.0,
        }
    }

    pub fn with_nu(mut self, nu: f64) -> Result<Self> {
        Self::check_nu(nu)?;
        self.nu = nu;
        Ok(self)
    }

    fn check_nu(nu: f64) -> Result<()> {
        if nu.is_finite() && nu >= 0.0 {
            Ok(())
        } else {
            Err(Error::Config(format!("diffusion coefficient {nu} must be finite and >= 0")))
        }
    }

    #[inline]
    pub fn g(&self, u: f64) -> f64 {
        self.g1.g(u)
    }

    #[inline]
    pub fn a(&self, u: f64) -> f64 {
        self.g1.a(u)
    }

    /// Flux along y; zero when the model is one-dimensional.
    pub fn y_flux(&self) -> ScalarFlux {
        self.g2.unwrap_or(ScalarFlux::Linear(0.0))
    }
}
