use serde::Serialize;

use crate::error::{Error, Result};

/// Default for the steady residual max|Δu|/Δt.
pub const DEFAULT_STEADY_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: usize = 1_000_000;

/// Outcome of a stability bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeStep {
    Finite(f64),
    /// Nothing propagates or diffuses; the state is already steady.
    Frozen,
}

/// When to stop marching.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stop {
    pub t_final: Option<f64>,
    pub steady_tol: Option<f64>,
    pub max_steps: usize,
    /// Hitting `max_steps` is an error when set, otherwise the last state is returned.
    pub strict: bool,
}

impl Stop {
    pub fn at(t_final: f64) -> Self {
        Self {
            t_final: Some(t_final),
            steady_tol: None,
            max_steps: DEFAULT_MAX_STEPS,
            strict: true,
        }
    }

    pub fn steady(tol: f64) -> Self {
        Self {
            t_final: None,
            steady_tol: Some(tol),
            max_steps: DEFAULT_MAX_STEPS,
            strict: true,
        }
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn lenient(mut self) -> Self {
        self.strict = false;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StopReason {
    FinalTime,
    Steady,
    Frozen,
    StepLimit,
}

/// Per-run history.
#[derive(Debug, Clone, Serialize)]
pub struct RunLog {
    pub steps: usize,
    pub reason: StopReason,
    /// max|u^{n+1} − u^n| / Δt for every step.
    pub residuals: Vec<f64>,
}

/// A time-explicit solver over some state type.
pub trait Evolve {
    type State: Clone;

    fn time(&self, s: &Self::State) -> f64;
    fn stable_step(&self, s: &Self::State) -> Result<TimeStep>;
    fn step(&self, s: &Self::State, dt: f64) -> Result<Self::State>;
    /// max |new − old| over all stored values.
    fn change(&self, old: &Self::State, new: &Self::State) -> f64;

    /// Marches until the stop condition, recording residuals.
    fn run(&self, initial: Self::State, stop: Stop) -> Result<(Self::State, RunLog)> {
        if stop.t_final.is_none() && stop.steady_tol.is_none() {
            return Err(Error::Config("run needs a final time or a steady tolerance".into()));
        }
        let mut s = initial;
        let mut residuals = Vec::new();
        if let Some(tf) = stop.t_final {
            if tf <= self.time(&s) {
                return Ok((s, RunLog { steps: 0, reason: StopReason::FinalTime, residuals }));
            }
        }
        loop {
            if residuals.len() >= stop.max_steps {
                if !stop.strict {
                    let steps = residuals.len();
                    return Ok((s, RunLog { steps, reason: StopReason::StepLimit, residuals }));
                }
                return Err(Error::NonConvergence {
                    steps: residuals.len(),
                    residual: residuals.last().copied().unwrap_or(f64::NAN),
                });
            }
            let mut dt = match self.stable_step(&s)? {
                TimeStep::Finite(dt) => dt,
                TimeStep::Frozen => {
                    let steps = residuals.len();
                    return Ok((s, RunLog { steps, reason: StopReason::Frozen, residuals }));
                }
            };
            let mut last = false;
            if let Some(tf) = stop.t_final {
                let left = tf - self.time(&s);
                if dt >= left {
                    dt = left;
                    last = true;
                }
            }
            let next = self.step(&s, dt)?;
            let res = self.change(&s, &next) / dt;
            residuals.push(res);
            s = next;
            if last {
                let steps = residuals.len();
                return Ok((s, RunLog { steps, reason: StopReason::FinalTime, residuals }));
            }
            if let Some(tol) = stop.steady_tol {
                if res < tol {
                    let steps = residuals.len();
                    return Ok((s, RunLog { steps, reason: StopReason::Steady, residuals }));
                }
            }
        }
    }
}

/// Index of the first non-finite value, if any.
pub(crate) fn first_non_finite(values: &[f64]) -> Option<usize> {
    values.iter().position(|v| !v.is_finite())
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}
