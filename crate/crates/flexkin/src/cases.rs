//! Registry of benchmark setups: domain, initial data, boundaries, model and stopping rule.

use std::f64::consts::{FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryCondition, Side};
use crate::error::{Error, Result};
use crate::exact;
use crate::model::{FluxModel, ScalarFlux};
use crate::solver2d::Boundary2D;
use crate::swe1d::GRAVITY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseId {
    /// Smooth Burgers convergence study, u₀ = sin 2πx.
    Sine,
    Tc1,
    Tc2a,
    Tc2b,
    Tc3,
    Tc4,
    Tc5,
    Tc6a,
    Tc6b,
    Tc7,
    Tc8a,
    Tc8b,
    Tc9,
    Tc10,
    Tc11,
    Tc12,
    Tc13,
    Tc14,
    Tc15,
}

impl CaseId {
    pub const ALL: [CaseId; 19] = [
        CaseId::Sine,
        CaseId::Tc1,
        CaseId::Tc2a,
        CaseId::Tc2b,
        CaseId::Tc3,
        CaseId::Tc4,
        CaseId::Tc5,
        CaseId::Tc6a,
        CaseId::Tc6b,
        CaseId::Tc7,
        CaseId::Tc8a,
        CaseId::Tc8b,
        CaseId::Tc9,
        CaseId::Tc10,
        CaseId::Tc11,
        CaseId::Tc12,
        CaseId::Tc13,
        CaseId::Tc14,
        CaseId::Tc15,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Sine => "sine",
            CaseId::Tc1 => "tc1",
            CaseId::Tc2a => "tc2a",
            CaseId::Tc2b => "tc2b",
            CaseId::Tc3 => "tc3",
            CaseId::Tc4 => "tc4",
            CaseId::Tc5 => "tc5",
            CaseId::Tc6a => "tc6a",
            CaseId::Tc6b => "tc6b",
            CaseId::Tc7 => "tc7",
            CaseId::Tc8a => "tc8a",
            CaseId::Tc8b => "tc8b",
            CaseId::Tc9 => "tc9",
            CaseId::Tc10 => "tc10",
            CaseId::Tc11 => "tc11",
            CaseId::Tc12 => "tc12",
            CaseId::Tc13 => "tc13",
            CaseId::Tc14 => "tc14",
            CaseId::Tc15 => "tc15",
        }
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        // bare names of split cases pick the first variant
        let s = match s.as_str() {
            "tc2" => "tc2a",
            "tc6" => "tc6a",
            "tc8" => "tc8a",
            other => other,
        };
        CaseId::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown case '{s}'")))
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub type Profile1D = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// u(x, t)
pub type Oracle1D = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type Profile2D = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
/// u(x, y, t)
pub type Oracle2D = Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    Time(f64),
    Steady,
}

#[derive(Clone)]
pub struct Scalar1DCase {
    pub domain: (f64, f64),
    pub cells: usize,
    pub model: FluxModel,
    pub bc: BoundaryCondition,
    pub initial: Profile1D,
    pub stop: StopRule,
    pub exact: Option<Oracle1D>,
}

#[derive(Clone)]
pub struct Swe1DCase {
    pub domain: (f64, f64),
    pub cells: usize,
    pub bc: BoundaryCondition,
    pub bed: Profile1D,
    pub depth: Profile1D,
    pub gravity: f64,
    pub stop: StopRule,
}

#[derive(Clone)]
pub struct Scalar2DCase {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub cells: (usize, usize),
    pub model: FluxModel,
    pub bc: Boundary2D,
    pub initial: Profile2D,
    pub stop: StopRule,
    pub exact: Option<Oracle2D>,
}

/// Circular dam break on a flat bed.
#[derive(Debug, Clone)]
pub struct Swe2DCase {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub cells: (usize, usize),
    pub bc: Boundary2D,
    pub center: (f64, f64),
    pub radius: f64,
    pub inner_depth: f64,
    pub outer_depth: f64,
    pub gravity: f64,
    pub stop: StopRule,
}

impl Swe2DCase {
    pub fn depth(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.center.0, y - self.center.1);
        if dx * dx + dy * dy <= self.radius * self.radius {
            self.inner_depth
        } else {
            self.outer_depth
        }
    }
}

#[derive(Clone)]
pub enum Problem {
    Scalar1D(Scalar1DCase),
    Swe1D(Swe1DCase),
    Scalar2D(Scalar2DCase),
    Swe2D(Swe2DCase),
}

#[derive(Clone)]
pub struct Case {
    pub id: CaseId,
    pub title: &'static str,
    pub problem: Problem,
    /// Parameters chosen here rather than taken from the benchmark definition.
    pub assumed: Vec<(&'static str, f64)>,
}

impl Case {
    pub fn has_oracle(&self) -> bool {
        match &self.problem {
            Problem::Scalar1D(c) => c.exact.is_some(),
            Problem::Scalar2D(c) => c.exact.is_some(),
            _ => false,
        }
    }

    pub fn stop(&self) -> StopRule {
        match &self.problem {
            Problem::Scalar1D(c) => c.stop,
            Problem::Swe1D(c) => c.stop,
            Problem::Scalar2D(c) => c.stop,
            Problem::Swe2D(c) => c.stop,
        }
    }
}

const THIRD: f64 = 1.0 / 3.0;

fn three_state(a: f64, b: f64, c: f64) -> Profile1D {
    Arc::new(move |x| {
        if x < -THIRD {
            a
        } else if x <= THIRD {
            b
        } else {
            c
        }
    })
}

/// Two non-interacting Burgers Riemann problems at ∓⅓.
fn two_riemann(a: f64, b: f64, c: f64) -> Oracle1D {
    Arc::new(move |x, t| {
        if x < 0.0 {
            exact::riemann_burgers(a, b, x + THIRD, t)
        } else {
            exact::riemann_burgers(b, c, x - THIRD, t)
        }
    })
}

fn step(left: f64, right: f64) -> Profile1D {
    Arc::new(move |x| if x <= 0.0 { left } else { right })
}

fn burgers_nu(nu: f64) -> FluxModel {
    FluxModel {
        g1: ScalarFlux::Burgers,
        g2: None,
        nu,
    }
}

fn boundary_layer(pe: f64) -> Scalar1DCase {
    Scalar1DCase {
        domain: (0.0, 1.0),
        cells: 100,
        model: FluxModel {
            g1: ScalarFlux::Linear(1.0),
            g2: None,
            nu: 1.0 / pe,
        },
        bc: BoundaryCondition {
            left: Side::DirichletFace(0.0),
            right: Side::DirichletFace(1.0),
        },
        initial: Arc::new(|x| x),
        stop: StopRule::Steady,
        exact: Some(Arc::new(move |x, _| {
            exact::advection_diffusion_steady(x, pe).unwrap_or(f64::NAN)
        })),
    }
}

fn viscous_shock(nu: f64) -> Scalar1DCase {
    Scalar1DCase {
        domain: (-1.0, 1.0),
        cells: 100,
        model: burgers_nu(nu),
        bc: BoundaryCondition::dirichlet(1.0, -1.0),
        initial: step(1.0, -1.0),
        stop: StopRule::Steady,
        exact: Some(Arc::new(move |x, _| exact::viscous_steady_shock(x, nu, 1.0, -1.0))),
    }
}

fn inviscid(init: (f64, f64, f64)) -> Scalar1DCase {
    Scalar1DCase {
        domain: (-1.0, 1.0),
        cells: 100,
        model: FluxModel::burgers(),
        bc: BoundaryCondition::extrapolate(),
        initial: three_state(init.0, init.1, init.2),
        stop: StopRule::Time(0.3),
        exact: Some(two_riemann(init.0, init.1, init.2)),
    }
}

fn tc11_bottom(x: f64, _y: f64, _t: f64) -> f64 {
    1.0 - 2.0 * x
}

fn tc12_bottom(x: f64, _y: f64, _t: f64) -> f64 {
    1.5 - 2.0 * x
}

fn tc13_front(x: f64, y: f64, t: f64) -> f64 {
    exact::burgers2d_front(x, y, t, 0.01)
}

/// Steady solution of u_t + (u²/2)_x + u_y = 0 fed by u(x,0) = c − 2x,
/// u(0,y) = c and u(1,y) = c − 2 on the unit square. Characteristics from
/// the bottom converge at y = ½ and a shock of slope c − 1 continues upward.
pub fn spekreijse(c: f64, x: f64, y: f64) -> f64 {
    let (ul, ur) = (c, c - 2.0);
    if y < 0.5 {
        if x < c * y {
            ul
        } else if x > 1.0 + ur * y {
            ur
        } else {
            (c - 2.0 * x) / (1.0 - 2.0 * y)
        }
    } else {
        let shock = 0.5 * c + (c - 1.0) * (y - 0.5);
        if x < shock {
            ul
        } else {
            ur
        }
    }
}

fn spekreijse_case(c: f64, bottom: fn(f64, f64, f64) -> f64) -> Scalar2DCase {
    Scalar2DCase {
        x: (0.0, 1.0),
        y: (0.0, 1.0),
        cells: (64, 64),
        model: FluxModel {
            g1: ScalarFlux::Burgers,
            g2: Some(ScalarFlux::Linear(1.0)),
            nu: 0.0,
        },
        bc: Boundary2D {
            west: Side::Dirichlet(c),
            east: Side::Dirichlet(c - 2.0),
            south: Side::Profile(bottom),
            north: Side::Extrapolate,
        },
        initial: Arc::new(move |x, _| c - 2.0 * x),
        stop: StopRule::Steady,
        exact: Some(Arc::new(move |x, y, _| spekreijse(c, x, y))),
    }
}

/// Bed of the 1D dam break: a cosine bump on [0.4, 0.6].
pub fn tc9_bed(x: f64) -> f64 {
    if (0.4..=0.6).contains(&x) {
        0.125 * ((10.0 * PI * (x - 0.5)).cos() + 1.0)
    } else {
        0.0
    }
}

pub fn case(id: CaseId) -> Case {
    let (title, problem, assumed): (&'static str, Problem, Vec<(&'static str, f64)>) = match id {
        CaseId::Sine => (
            "smooth Burgers wave before breaking",
            Problem::Scalar1D(Scalar1DCase {
                domain: (0.0, 1.0),
                cells: 80,
                model: FluxModel::burgers(),
                bc: BoundaryCondition::periodic(),
                initial: Arc::new(|x| (2.0 * PI * x).sin()),
                stop: StopRule::Time(exact::SINE_STUDY_TIME),
                exact: Some(Arc::new(|x, t| exact::burgers_sine(x, t).unwrap_or(f64::NAN))),
            }),
            vec![],
        ),
        CaseId::Tc1 => (
            "linear advection of a three-state step",
            Problem::Scalar1D(Scalar1DCase {
                domain: (-1.0, 1.0),
                cells: 100,
                model: FluxModel::linear(1.0),
                bc: BoundaryCondition {
                    left: Side::Dirichlet(0.0),
                    right: Side::Extrapolate,
                },
                initial: three_state(0.0, 1.0, -1.0),
                stop: StopRule::Time(0.3),
                exact: Some(Arc::new(exact::linear_advection_profile)),
            }),
            vec![],
        ),
        CaseId::Tc2a => ("steady boundary layer, Pe = 1", Problem::Scalar1D(boundary_layer(1.0)), vec![]),
        CaseId::Tc2b => ("steady boundary layer, Pe = 50", Problem::Scalar1D(boundary_layer(50.0)), vec![]),
        CaseId::Tc3 => ("steady shock and expansion fan", Problem::Scalar1D(inviscid((0.0, 1.0, -1.0))), vec![]),
        CaseId::Tc4 => ("moving shock and expansion fan", Problem::Scalar1D(inviscid((0.0, 1.0, 0.0))), vec![]),
        CaseId::Tc5 => ("steady shock and transonic fan", Problem::Scalar1D(inviscid((-1.0, 1.0, -1.0))), vec![]),
        CaseId::Tc6a => (
            "viscous travelling front, nu = 0.05",
            Problem::Scalar1D(Scalar1DCase {
                domain: (-2.0, 3.0),
                cells: 100,
                model: burgers_nu(0.05),
                bc: BoundaryCondition::dirichlet(1.0, 0.0),
                initial: Arc::new(|x| exact::viscous_front(x, 0.0, 0.05)),
                stop: StopRule::Time(3.0),
                exact: Some(Arc::new(|x, t| exact::viscous_front(x, t, 0.05))),
            }),
            vec![],
        ),
        CaseId::Tc6b => (
            "viscous travelling front from a step, nu = 0.001",
            Problem::Scalar1D(Scalar1DCase {
                domain: (-2.0, 3.0),
                cells: 100,
                model: burgers_nu(0.001),
                bc: BoundaryCondition::dirichlet(1.0, 0.0),
                initial: step(1.0, 0.0),
                stop: StopRule::Time(1.0),
                exact: Some(Arc::new(|x, t| exact::viscous_front(x, t, 0.001))),
            }),
            vec![],
        ),
        CaseId::Tc7 => (
            "decaying viscous sine wave",
            Problem::Scalar1D(Scalar1DCase {
                domain: (-1.0, 1.0),
                cells: 100,
                model: burgers_nu(0.1),
                bc: BoundaryCondition {
                    left: Side::DirichletFace(0.0),
                    right: Side::DirichletFace(0.0),
                },
                initial: Arc::new(|x| -(PI * x).sin()),
                stop: StopRule::Time(2.55237),
                exact: Some(Arc::new(|x, t| {
                    exact::viscous_sine_series(x, t, 0.1, exact::SINE_SERIES_TERMS).unwrap_or(f64::NAN)
                })),
            }),
            vec![],
        ),
        CaseId::Tc8a => ("steady viscous shock, nu = 0.1", Problem::Scalar1D(viscous_shock(0.1)), vec![]),
        CaseId::Tc8b => ("steady viscous shock, nu = 0.001", Problem::Scalar1D(viscous_shock(0.001)), vec![]),
        CaseId::Tc9 => (
            "dam break over a bed bump",
            Problem::Swe1D(Swe1DCase {
                domain: (0.0, 1.0),
                cells: 100,
                bc: BoundaryCondition::extrapolate(),
                bed: Arc::new(tc9_bed),
                depth: Arc::new(|x| if x <= 0.5 { 1.0 - tc9_bed(x) } else { 0.5 - tc9_bed(x) }),
                gravity: GRAVITY,
                stop: StopRule::Time(0.1),
            }),
            vec![("gravity", GRAVITY)],
        ),
        CaseId::Tc10 => (
            "2D advection of a diagonal discontinuity",
            Problem::Scalar2D(Scalar2DCase {
                x: (0.0, 1.0),
                y: (0.0, 1.0),
                cells: (64, 64),
                model: FluxModel {
                    g1: ScalarFlux::Linear(FRAC_PI_4.cos()),
                    g2: Some(ScalarFlux::Linear(FRAC_PI_4.sin())),
                    nu: 0.0,
                },
                bc: Boundary2D {
                    west: Side::Dirichlet(1.0),
                    east: Side::Extrapolate,
                    south: Side::Dirichlet(0.0),
                    north: Side::Extrapolate,
                },
                initial: Arc::new(|_, _| 0.0),
                stop: StopRule::Steady,
                exact: Some(Arc::new(|x, y, _| exact::lce2d_diagonal(x, y, FRAC_PI_4))),
            }),
            vec![],
        ),
        CaseId::Tc11 => ("2D Burgers normal shock", Problem::Scalar2D(spekreijse_case(1.0, tc11_bottom)), vec![]),
        CaseId::Tc12 => ("2D Burgers oblique shock", Problem::Scalar2D(spekreijse_case(1.5, tc12_bottom)), vec![]),
        CaseId::Tc13 => (
            "2D viscous Burgers planar front",
            Problem::Scalar2D(Scalar2DCase {
                x: (-0.5, 0.5),
                y: (-0.5, 0.5),
                cells: (64, 64),
                model: FluxModel {
                    g1: ScalarFlux::Burgers,
                    g2: Some(ScalarFlux::Burgers),
                    nu: 0.01,
                },
                bc: Boundary2D::uniform(Side::Profile(tc13_front)),
                initial: Arc::new(|x, y| tc13_front(x, y, 0.0)),
                stop: StopRule::Time(0.1),
                exact: Some(Arc::new(tc13_front)),
            }),
            vec![],
        ),
        CaseId::Tc14 => (
            "2D viscous Burgers periodic vortex pattern",
            Problem::Scalar2D(Scalar2DCase {
                x: (0.0, 1.0),
                y: (0.0, 1.0),
                cells: (64, 64),
                model: FluxModel {
                    g1: ScalarFlux::Burgers,
                    g2: Some(ScalarFlux::Burgers),
                    nu: 0.01,
                },
                bc: Boundary2D::uniform(Side::Periodic),
                initial: Arc::new(|x, y| (2.0 * PI * x).sin() * (2.0 * PI * y).cos()),
                stop: StopRule::Time(0.1),
                exact: None,
            }),
            vec![],
        ),
        CaseId::Tc15 => (
            "circular dam break",
            Problem::Swe2D(Swe2DCase {
                x: (0.0, 50.0),
                y: (0.0, 50.0),
                cells: (40, 40),
                bc: Boundary2D::uniform(Side::Reflect),
                center: (25.0, 25.0),
                radius: 11.0,
                inner_depth: 10.0,
                outer_depth: 1.0,
                gravity: GRAVITY,
                stop: StopRule::Time(0.69),
            }),
            vec![("inner_depth", 10.0), ("outer_depth", 1.0), ("gravity", GRAVITY)],
        ),
    };
    Case {
        id,
        title,
        problem,
        assumed,
    }
}
