//! Finite-volume schemes built on a flexible-velocity discrete kinetic model.
//!
//! Scalar conservation laws and convection-diffusion equations in one and
//! two dimensions, and the shallow-water system with bed topography. Upwind
//! (KFDS, KFDS+), Lax-Wendroff type (KLW) and minmod-limited (TVD) fluxes
//! share one kinetic construction; `exact` and `verify` supply reference
//! solutions and convergence measurement.

pub mod boundary;
pub mod cases;
pub mod config;
pub mod driver;
pub mod error;
pub mod field;
pub mod grid;
pub mod io;
pub mod kinetic;
pub mod model;
pub mod runner;
pub mod exact;
pub mod solver1d;
pub mod solver2d;
pub mod swe1d;
pub mod verify;
pub mod wavespeed;

pub use boundary::{pad_with_ghosts, BoundaryCondition, Side};
pub use driver::{Evolve, RunLog, Stop, StopReason, TimeStep};
pub use error::{Error, Result};
pub use field::{Field2D, ScalarField1D};
pub use grid::{build_grid_1d, Grid1D, Grid2D};
pub use model::{FluxModel, ScalarFlux};
pub use solver1d::{SchemeKind, Solver1D};
pub use wavespeed::WaveSpeedMode;
pub use cases::CaseId;
pub use config::{OutputSpec, RunConfig, Settings};
pub use runner::{run_case, Outcome};
pub use verify::{convergence_study, eoc, error_norms, ConvergenceReport, Eoc};
