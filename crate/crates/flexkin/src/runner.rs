//! Drives registry cases through the solvers and summarizes the result.

use std::fmt;

use serde::Serialize;

use crate::cases::{case, CaseId, Problem, Scalar1DCase, Scalar2DCase, StopRule, Swe1DCase, Swe2DCase};
use crate::config::{Cells, RunConfig};
use crate::driver::{Evolve, RunLog, Stop, StopReason, DEFAULT_MAX_STEPS, DEFAULT_STEADY_TOL};
use crate::error::{Error, Result};
use crate::field::{Field2D, ScalarField1D};
use crate::grid::{Grid1D, Grid2D};
use crate::model::ScalarFlux;
use crate::solver1d::{SchemeKind, Solver1D};
use crate::solver2d::{Solver2D, SweSolver2D};
use crate::swe1d::{SweSolver1D, SweState};
use crate::verify::{convergence_study, diagonal_defect, error_norms, mirror_defect, row_crossings, ConvergenceReport};
use crate::wavespeed::WaveSpeedMode;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StopOptions {
    pub steady_tol: f64,
    pub max_steps: usize,
}

impl Default for StopOptions {
    fn default() -> Self {
        Self {
            steady_tol: DEFAULT_STEADY_TOL,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

fn stop_for(rule: StopRule, t_final: Option<f64>, opts: &StopOptions) -> Stop {
    match (t_final, rule) {
        (Some(t), _) | (None, StopRule::Time(t)) => Stop::at(t).with_max_steps(opts.max_steps),
        // a steady run that stalls still returns its last state
        (None, StopRule::Steady) => Stop::steady(opts.steady_tol).with_max_steps(opts.max_steps).lenient(),
    }
}

#[derive(Debug, Clone)]
pub struct ScalarRun1D {
    pub field: ScalarField1D,
    pub log: RunLog,
    /// Oracle at the cell centers and the final time.
    pub exact: Option<Vec<f64>>,
}

pub fn simulate_scalar_1d(
    c: &Scalar1DCase,
    n: usize,
    scheme: SchemeKind,
    mode: WaveSpeedMode,
    cfl: f64,
    t_final: Option<f64>,
    opts: &StopOptions,
) -> Result<ScalarRun1D> {
    let grid = Grid1D::new(c.domain.0, c.domain.1, n)?;
    let solver = Solver1D::new(c.model, scheme, mode, c.bc, cfl)?;
    let initial = ScalarField1D::from_fn(grid, |x| (c.initial)(x));
    let (field, log) = solver.run(initial, stop_for(c.stop, t_final, opts))?;
    let exact = c
        .exact
        .as_ref()
        .map(|ex| field.grid.centers().into_iter().map(|x| ex(x, field.t)).collect());
    Ok(ScalarRun1D { field, log, exact })
}

#[derive(Debug, Clone)]
pub struct SweRun1D {
    pub state: SweState,
    pub log: RunLog,
}

pub fn simulate_swe_1d(
    c: &Swe1DCase,
    n: usize,
    scheme: SchemeKind,
    mode: WaveSpeedMode,
    cfl: f64,
    t_final: Option<f64>,
    opts: &StopOptions,
) -> Result<SweRun1D> {
    let grid = Grid1D::new(c.domain.0, c.domain.1, n)?;
    let x = grid.centers();
    let h = x.iter().map(|&x| (c.depth)(x)).collect();
    let bed = x.iter().map(|&x| (c.bed)(x)).collect();
    let initial = SweState::new(grid, h, vec![0.0; n], bed, c.gravity)?;
    let solver = SweSolver1D::new(scheme, mode, c.bc, cfl)?;
    let (state, log) = solver.run(initial, stop_for(c.stop, t_final, opts))?;
    Ok(SweRun1D { state, log })
}

#[derive(Debug, Clone)]
pub struct ScalarRun2D {
    pub field: Field2D,
    pub log: RunLog,
    pub exact: Option<Vec<f64>>,
}

pub fn simulate_scalar_2d(
    c: &Scalar2DCase,
    cells: (usize, usize),
    scheme: SchemeKind,
    mode: WaveSpeedMode,
    cfl: f64,
    t_final: Option<f64>,
    opts: &StopOptions,
) -> Result<ScalarRun2D> {
    let grid = Grid2D::new(c.x, c.y, cells.0, cells.1)?;
    let solver = Solver2D::new(c.model, scheme, mode, c.bc, cfl)?;
    let initial = Field2D::scalar_from_fn(grid, |x, y| (c.initial)(x, y));
    let (field, log) = solver.run(initial, stop_for(c.stop, t_final, opts))?;
    let exact = c.exact.as_ref().map(|ex| {
        let t = field.t;
        Field2D::scalar_from_fn(field.grid.clone(), |x, y| ex(x, y, t)).data
    });
    Ok(ScalarRun2D { field, log, exact })
}

#[derive(Debug, Clone)]
pub struct SweRun2D {
    pub field: Field2D,
    pub log: RunLog,
}

pub fn simulate_swe_2d(
    c: &Swe2DCase,
    cells: (usize, usize),
    scheme: SchemeKind,
    mode: WaveSpeedMode,
    cfl: f64,
    t_final: Option<f64>,
    opts: &StopOptions,
) -> Result<SweRun2D> {
    let grid = Grid2D::new(c.x, c.y, cells.0, cells.1)?;
    let solver = SweSolver2D::new(scheme, mode, c.bc, cfl, c.gravity)?;
    let initial = Field2D::from_fn(grid, 3, |x, y| vec![c.depth(x, y), 0.0, 0.0]);
    let (field, log) = solver.run(initial, stop_for(c.stop, t_final, opts))?;
    Ok(SweRun2D { field, log })
}

/// Positions where `u` crosses `level`, linearly interpolated between centers.
/// The sign gives the direction: +1 rising, −1 falling.
pub fn crossings_1d(x: &[f64], u: &[f64], level: f64) -> Vec<(f64, i8)> {
    let mut out = Vec::new();
    for j in 0..u.len().saturating_sub(1) {
        let (a, b) = (u[j] - level, u[j + 1] - level);
        if a * b < 0.0 {
            let s = a / (a - b);
            out.push((x[j] + s * (x[j + 1] - x[j]), if b > a { 1 } else { -1 }));
        }
    }
    out
}

/// First center where an inviscid Burgers solution jumps upward by more than `threshold`
/// between neighbours, which only an entropy-violating expansion shock does.
pub fn expansion_shock(x: &[f64], u: &[f64], threshold: f64) -> Option<f64> {
    (0..u.len().saturating_sub(1))
        .find(|&j| u[j + 1] - u[j] > threshold)
        .map(|j| 0.5 * (x[j] + x[j + 1]))
}

#[derive(Debug, Clone)]
pub enum Artifact {
    Scalar1D(ScalarRun1D),
    Swe1D(SweRun1D),
    Scalar2D(ScalarRun2D),
    Swe2D(SweRun2D),
    Study(ConvergenceReport),
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub case: CaseId,
    pub scheme: SchemeKind,
    pub lambda: WaveSpeedMode,
    pub cells: String,
    pub t: f64,
    pub steps: usize,
    pub stop: Option<StopReason>,
    pub l1: Option<f64>,
    pub l2: Option<f64>,
    pub mass: Option<f64>,
    pub notes: Vec<String>,
    /// Parameters not fixed by the benchmark definition.
    pub assumed: Vec<(String, f64)>,
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} scheme={} lambda={} cells={}", self.case, self.scheme, self.lambda, self.cells)?;
        if let Some(stop) = self.stop {
            write!(f, " t={:.6} steps={} stop={:?}", self.t, self.steps, stop)?;
        }
        if let (Some(l1), Some(l2)) = (self.l1, self.l2) {
            write!(f, " L1={l1:.6e} L2={l2:.6e}")?;
        }
        if let Some(m) = self.mass {
            write!(f, " mass={m:.12e}")?;
        }
        for n in &self.notes {
            write!(f, " [{n}]")?;
        }
        if !self.assumed.is_empty() {
            let list: Vec<String> = self.assumed.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, " [assumed {}]", list.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub summary: Summary,
    pub artifact: Artifact,
}

fn line_cells(cfg: &RunConfig, default: usize) -> usize {
    match cfg.cells {
        Some(Cells::Line(n)) => n,
        _ => default,
    }
}

fn plane_cells(cfg: &RunConfig, default: (usize, usize)) -> (usize, usize) {
    match cfg.cells {
        Some(Cells::Plane(nx, ny)) => (nx, ny),
        Some(Cells::Line(n)) => (n, n),
        None => default,
    }
}

fn stall_note(log: &RunLog) -> Option<String> {
    (log.reason == StopReason::StepLimit).then(|| {
        format!(
            "steady tolerance not reached after {} steps, residual {:.3e}",
            log.steps,
            log.residuals.last().copied().unwrap_or(f64::NAN)
        )
    })
}

fn scalar_1d_notes(id: CaseId, c: &Scalar1DCase, run: &ScalarRun1D) -> Vec<String> {
    let x = run.field.grid.centers();
    let u = &run.field.u;
    let t = run.field.t;
    let mut notes = Vec::new();
    if id == CaseId::Tc1 {
        let up = crossings_1d(&x, u, 0.5).into_iter().find(|c| c.1 > 0).map(|c| c.0);
        let down = crossings_1d(&x, u, 0.0).into_iter().rev().find(|c| c.1 < 0).map(|c| c.0);
        let show = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{v:.4}"));
        notes.push(format!(
            "jumps at {} and {} (exact {:.4} and {:.4})",
            show(up),
            show(down),
            -1.0 / 3.0 + t,
            1.0 / 3.0 + t
        ));
    }
    if c.model.g1 == ScalarFlux::Burgers && c.model.nu == 0.0 {
        match expansion_shock(&x, u, 0.5) {
            Some(at) => notes.push(format!("expansion shock at x={at:.4}")),
            None if id == CaseId::Tc5 => notes.push("fan monotone".into()),
            None => {}
        }
    }
    notes.extend(stall_note(&run.log));
    notes
}

fn planar_shock_note(id: CaseId, run: &ScalarRun2D) -> Option<String> {
    let c = match id {
        CaseId::Tc11 => 1.0,
        CaseId::Tc12 => 1.5,
        _ => return None,
    };
    let level = c - 1.0;
    let h = run.field.grid.dx();
    let mut worst: f64 = 0.0;
    for (y, hit) in row_crossings(&run.field, 0, level) {
        if y <= 0.5 {
            continue;
        }
        let exact = 0.5 * c + (c - 1.0) * (y - 0.5);
        // rows whose shock has reached the last cell cannot show a crossing
        if exact > run.field.grid.x.x_max - 1.5 * h {
            continue;
        }
        worst = worst.max(hit.map_or(f64::INFINITY, |x| (x - exact).abs()));
    }
    Some(format!("shock offset above y=0.5 at most {:.3} cells", worst / h))
}

/// Runs the configured case (or convergence study) without writing anything.
pub fn run_case(cfg: &RunConfig) -> Result<Outcome> {
    let c = case(cfg.case);
    let opts = StopOptions {
        steady_tol: cfg.steady_tol,
        max_steps: cfg.max_steps,
    };
    let mut summary = Summary {
        case: cfg.case,
        scheme: cfg.scheme,
        lambda: cfg.mode,
        cells: String::new(),
        t: 0.0,
        steps: 0,
        stop: None,
        l1: None,
        l2: None,
        mass: None,
        notes: Vec::new(),
        assumed: c.assumed.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
    };
    if cfg.eoc {
        let report = convergence_study(cfg.case, cfg.scheme, cfg.mode, &cfg.grids, cfg.cfl)?;
        summary.cells = cfg.grids.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",");
        if let Some(p) = report.terminal_l1_eoc() {
            summary.notes.push(format!("terminal L1 EOC {p}"));
        }
        if let Some(fail) = &report.failure {
            summary.notes.push(format!("stopped early: {fail}"));
        }
        if let Some(last) = report.rows.last() {
            summary.l1 = Some(last.l1);
            summary.l2 = Some(last.l2);
        }
        return Ok(Outcome {
            summary,
            artifact: Artifact::Study(report),
        });
    }
    let artifact = match &c.problem {
        Problem::Scalar1D(p) => {
            let n = line_cells(cfg, p.cells);
            let run = simulate_scalar_1d(p, n, cfg.scheme, cfg.mode, cfg.cfl, cfg.t_final, &opts)?;
            summary.cells = n.to_string();
            summary.t = run.field.t;
            summary.steps = run.log.steps;
            summary.stop = Some(run.log.reason);
            summary.mass = Some(run.field.total());
            if let Some(ex) = &run.exact {
                let (l1, l2) = error_norms(&run.field.u, ex, run.field.grid.dx)?;
                summary.l1 = Some(l1);
                summary.l2 = Some(l2);
            }
            summary.notes = scalar_1d_notes(cfg.case, p, &run);
            Artifact::Scalar1D(run)
        }
        Problem::Swe1D(p) => {
            let n = line_cells(cfg, p.cells);
            let run = simulate_swe_1d(p, n, cfg.scheme, cfg.mode, cfg.cfl, cfg.t_final, &opts)?;
            summary.cells = n.to_string();
            summary.t = run.state.t;
            summary.steps = run.log.steps;
            summary.stop = Some(run.log.reason);
            summary.mass = Some(run.state.mass());
            summary.notes.extend(stall_note(&run.log));
            Artifact::Swe1D(run)
        }
        Problem::Scalar2D(p) => {
            let cells = plane_cells(cfg, p.cells);
            let run = simulate_scalar_2d(p, cells, cfg.scheme, cfg.mode, cfg.cfl, cfg.t_final, &opts)?;
            summary.cells = format!("{}x{}", cells.0, cells.1);
            summary.t = run.field.t;
            summary.steps = run.log.steps;
            summary.stop = Some(run.log.reason);
            summary.mass = Some(run.field.total(0));
            if let Some(ex) = &run.exact {
                let (l1, l2) = error_norms(&run.field.data, ex, run.field.grid.cell_area())?;
                summary.l1 = Some(l1);
                summary.l2 = Some(l2);
            }
            summary.notes.extend(planar_shock_note(cfg.case, &run));
            summary.notes.extend(stall_note(&run.log));
            Artifact::Scalar2D(run)
        }
        Problem::Swe2D(p) => {
            let mut p = p.clone();
            if let Some(d) = cfg.inner_depth {
                p.inner_depth = d;
            }
            if let Some(d) = cfg.outer_depth {
                p.outer_depth = d;
            }
            for (k, v) in summary.assumed.iter_mut() {
                match k.as_str() {
                    "inner_depth" => *v = p.inner_depth,
                    "outer_depth" => *v = p.outer_depth,
                    _ => {}
                }
            }
            let cells = plane_cells(cfg, p.cells);
            let run = simulate_swe_2d(&p, cells, cfg.scheme, cfg.mode, cfg.cfl, cfg.t_final, &opts)?;
            summary.cells = format!("{}x{}", cells.0, cells.1);
            summary.t = run.field.t;
            summary.steps = run.log.steps;
            summary.stop = Some(run.log.reason);
            summary.mass = Some(run.field.total(0));
            let sym = mirror_defect(&run.field, 0, false, false)
                .max(mirror_defect(&run.field, 1, true, false))
                .max(mirror_defect(&run.field, 2, false, true))
                .max(diagonal_defect(&run.field));
            summary.notes.push(format!("symmetry defect {sym:.3e}"));
            Artifact::Swe2D(run)
        }
    };
    if summary.t.is_nan() {
        return Err(Error::Harness("run ended without a time".into()));
    }
    Ok(Outcome { summary, artifact })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Settings;

    fn config(text: &str) -> RunConfig {
        Settings::parse(text).unwrap().finish().unwrap().0
    }

    #[test]
    fn crossing_directions() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let u = [0.0, 1.0, 1.0, -1.0];
        let c = crossings_1d(&x, &u, 0.5);
        assert_eq!(c.len(), 2);
        assert!((c[0].0 - 0.5).abs() < 1e-15 && c[0].1 == 1);
        assert!((c[1].0 - 2.25).abs() < 1e-15 && c[1].1 == -1);
        assert_eq!(expansion_shock(&x, &u, 0.5), Some(0.5));
        assert_eq!(expansion_shock(&x, &[0.0, 0.2, 0.4, 0.6], 0.5), None);
    }

    #[test]
    fn tc1_jumps_tracked() {
        let out = run_case(&config("case = tc1")).unwrap();
        let line = out.summary.to_string();
        assert!(line.contains("jumps at"), "{line}");
        let Artifact::Scalar1D(run) = out.artifact else { panic!() };
        let x = run.field.grid.centers();
        let up = crossings_1d(&x, &run.field.u, 0.5).into_iter().find(|c| c.1 > 0).unwrap().0;
        let down = crossings_1d(&x, &run.field.u, 0.0).into_iter().rev().find(|c| c.1 < 0).unwrap().0;
        let dx = run.field.grid.dx;
        assert!((up - (-1.0 / 3.0 + 0.3)).abs() < dx, "{up}");
        assert!((down - (1.0 / 3.0 + 0.3)).abs() < dx, "{down}");
    }

    #[test]
    fn tc5_flags() {
        let rh = run_case(&config("case = tc5\nscheme = kfds+\nlambda = rh")).unwrap();
        assert!(rh.summary.notes.iter().any(|n| n.contains("expansion shock")), "{}", rh.summary);
        let hy = run_case(&config("case = tc5\nscheme = kfds+\nlambda = hybrid")).unwrap();
        assert!(hy.summary.notes.iter().any(|n| n == "fan monotone"), "{}", hy.summary);
    }

    #[test]
    fn time_override() {
        let out = run_case(&config("case = tc3\ntfinal = 0.05")).unwrap();
        assert!((out.summary.t - 0.05).abs() < 1e-15);
        assert_eq!(out.summary.stop, Some(StopReason::FinalTime));
    }

    #[test]
    fn stalled_steady_run_is_reported() {
        let out = run_case(&config("case = tc8a\nmax_steps = 5")).unwrap();
        assert_eq!(out.summary.stop, Some(StopReason::StepLimit));
        assert!(out.summary.notes.iter().any(|n| n.contains("not reached")));
    }

    #[test]
    fn dam_depth_overrides_are_reported() {
        let out = run_case(&config("case = tc15\ncells = 8\ntfinal = 0.05\ninner_depth = 4")).unwrap();
        assert!(out.summary.assumed.contains(&("inner_depth".to_string(), 4.0)));
        assert!(out.summary.to_string().contains("inner_depth=4"));
    }
}
