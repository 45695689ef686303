//! Run settings: flat `key = value` files and per-key overrides.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::cases::{case, CaseId, Problem};
use crate::driver::{DEFAULT_MAX_STEPS, DEFAULT_STEADY_TOL};
use crate::error::{Error, Result};
use crate::solver1d::{check_cfl, SchemeKind};
use crate::verify::DEFAULT_GRIDS;
use crate::wavespeed::WaveSpeedMode;

pub const DEFAULT_CFL: f64 = 0.8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cells {
    Line(usize),
    Plane(usize, usize),
}

impl FromStr for Cells {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cells must be N or NxM, got '{s}'"));
        match s.split_once(['x', 'X']) {
            Some((a, b)) => Ok(Cells::Plane(
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            )),
            None => Ok(Cells::Line(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

impl fmt::Display for Cells {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cells::Line(n) => write!(f, "{n}"),
            Cells::Plane(nx, ny) => write!(f, "{nx}x{ny}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    /// Raw little-endian f64 after a one-line text header; 2D fields only.
    Bin,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "bin" => Ok(Format::Bin),
            _ => Err(Error::Config(format!("unknown format '{s}' (csv, json, bin)"))),
        }
    }
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Bin => "bin",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum What {
    Field,
    Norms,
    EocTable,
}

impl FromStr for What {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "field" => Ok(What::Field),
            "norms" => Ok(What::Norms),
            "eoc-table" | "eoc" => Ok(What::EocTable),
            _ => Err(Error::Config(format!("unknown output kind '{s}' (field, norms, eoc-table)"))),
        }
    }
}

/// Validated run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub case: CaseId,
    pub scheme: SchemeKind,
    pub mode: WaveSpeedMode,
    /// Case default when absent.
    pub cells: Option<Cells>,
    pub cfl: f64,
    /// Overrides the case stopping rule.
    pub t_final: Option<f64>,
    pub steady_tol: f64,
    pub max_steps: usize,
    pub inner_depth: Option<f64>,
    pub outer_depth: Option<f64>,
    pub eoc: bool,
    pub grids: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputSpec {
    /// Derived from case and scheme when absent.
    pub path: Option<PathBuf>,
    pub format: Format,
    pub what: What,
}

impl OutputSpec {
    pub fn resolved_path(&self, cfg: &RunConfig) -> PathBuf {
        self.path.clone().unwrap_or_else(|| {
            let scheme = cfg.scheme.to_string().replace('+', "plus");
            let kind = match self.what {
                What::Field => "field",
                What::Norms => "norms",
                What::EocTable => "eoc",
            };
            PathBuf::from(format!("{}-{}-{}.{}", cfg.case, scheme, kind, self.format.extension()))
        })
    }
}

/// Unvalidated settings accumulated from a file and overrides.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub case: Option<CaseId>,
    pub scheme: Option<SchemeKind>,
    pub mode: Option<WaveSpeedMode>,
    pub cells: Option<Cells>,
    pub cfl: Option<f64>,
    pub t_final: Option<f64>,
    pub steady_tol: Option<f64>,
    pub max_steps: Option<usize>,
    pub inner_depth: Option<f64>,
    pub outer_depth: Option<f64>,
    pub eoc: bool,
    pub grids: Option<Vec<usize>>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub what: Option<What>,
}

fn number<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value '{value}' for {key}")))
}

fn flag(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(Error::Config(format!("invalid value '{value}' for {key}"))),
    }
}

impl Settings {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim().replace('_', "-").as_str() {
            "case" => self.case = Some(value.parse()?),
            "scheme" => self.scheme = Some(value.parse()?),
            "lambda" | "mode" => self.mode = Some(value.parse()?),
            "cells" => self.cells = Some(value.parse()?),
            "cfl" => self.cfl = Some(number(key, value)?),
            "tfinal" | "t-final" => self.t_final = Some(number(key, value)?),
            "steady-tol" => self.steady_tol = Some(number(key, value)?),
            "max-steps" => self.max_steps = Some(number(key, value)?),
            "inner-depth" => self.inner_depth = Some(number(key, value)?),
            "outer-depth" => self.outer_depth = Some(number(key, value)?),
            "eoc" => self.eoc = flag(key, value)?,
            "grids" => {
                let grids = value
                    .split(',')
                    .map(|g| number(key, g.trim()))
                    .collect::<Result<Vec<usize>>>()?;
                self.grids = Some(grids);
            }
            "out" => self.out = Some(PathBuf::from(value)),
            "format" => self.format = Some(value.parse()?),
            "what" => self.what = Some(value.parse()?),
            other => return Err(Error::Config(format!("unknown setting '{other}'"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", i + 1)))?;
            s.set(k, v).map_err(|e| Error::Config(format!("line {}: {e}", i + 1)))?;
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn finish(self) -> Result<(RunConfig, OutputSpec)> {
        let id = self.case.ok_or_else(|| Error::Config("no case selected".into()))?;
        let scheme = self.scheme.unwrap_or(SchemeKind::Kfds);
        let mode = self.mode.unwrap_or(scheme.default_mode());
        scheme.check_mode(mode)?;
        let cfl = self.cfl.unwrap_or(DEFAULT_CFL);
        check_cfl(cfl)?;
        let c = case(id);
        let planar = matches!(c.problem, Problem::Scalar2D(_) | Problem::Swe2D(_));
        let cells = match (self.cells, planar) {
            (Some(Cells::Plane(..)), false) => {
                return Err(Error::Config(format!("{id} is one-dimensional; use --cells N")));
            }
            (Some(Cells::Line(n)), true) => Some(Cells::Plane(n, n)),
            (other, _) => other,
        };
        if let Some(t) = self.t_final {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Config(format!("final time must be positive, got {t}")));
            }
        }
        let steady_tol = self.steady_tol.unwrap_or(DEFAULT_STEADY_TOL);
        if !(steady_tol > 0.0) {
            return Err(Error::Config("steady tolerance must be positive".into()));
        }
        let max_steps = self.max_steps.unwrap_or(DEFAULT_MAX_STEPS);
        if max_steps == 0 {
            return Err(Error::Config("max steps must be positive".into()));
        }
        if !matches!(c.problem, Problem::Swe2D(_)) && (self.inner_depth.is_some() || self.outer_depth.is_some()) {
            return Err(Error::Config(format!("dam depths only apply to {}", CaseId::Tc15)));
        }
        for d in [self.inner_depth, self.outer_depth].into_iter().flatten() {
            if !(d.is_finite() && d > 0.0) {
                return Err(Error::Config(format!("depth must be positive, got {d}")));
            }
        }
        if self.eoc {
            if !matches!(c.problem, Problem::Scalar1D(_)) || !c.has_oracle() {
                return Err(Error::Config(format!(
                    "--eoc needs a one-dimensional case with an exact solution; {id} has none"
                )));
            }
            if self.cells.is_some() {
                return Err(Error::Config("--eoc takes --grids, not --cells".into()));
            }
        } else if self.grids.is_some() {
            return Err(Error::Config("--grids only applies with --eoc".into()));
        }
        let what = self.what.unwrap_or(if self.eoc { What::EocTable } else { What::Field });
        match (what, self.eoc) {
            (What::EocTable, false) => return Err(Error::Config("an eoc-table output needs --eoc".into())),
            (What::Field | What::Norms, true) => {
                return Err(Error::Config("a convergence study only writes an eoc-table".into()));
            }
            _ => {}
        }
        if what == What::Norms && !c.has_oracle() {
            return Err(Error::Config(format!("{id} has no exact solution to measure norms against")));
        }
        let format = self.format.unwrap_or(Format::Csv);
        if format == Format::Bin && !(planar && what == What::Field) {
            return Err(Error::Config("binary output is only available for 2D fields".into()));
        }
        if let Some(p) = &self.out {
            let parent = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            if !parent.is_dir() {
                return Err(Error::Io(std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    format!("output directory {} does not exist", parent.display()),
                )));
            }
        }
        let grids = self.grids.unwrap_or_else(|| DEFAULT_GRIDS.to_vec());
        Ok((
            RunConfig {
                case: id,
                scheme,
                mode,
                cells,
                cfl,
                t_final: self.t_final,
                steady_tol,
                max_steps,
                inner_depth: self.inner_depth,
                outer_depth: self.outer_depth,
                eoc: self.eoc,
                grids,
            },
            OutputSpec {
                path: self.out,
                format,
                what,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_with_comments() {
        let s = Settings::parse("# run\ncase = tc8a\nscheme=tvd+\n\ncfl = 0.5 # safer\n").unwrap();
        let (cfg, out) = s.finish().unwrap();
        assert_eq!(cfg.case, CaseId::Tc8a);
        assert_eq!(cfg.scheme, SchemeKind::TvdKfdsPlus);
        assert_eq!(cfg.mode, WaveSpeedMode::Rh);
        assert_eq!(cfg.cfl, 0.5);
        assert_eq!(out.what, What::Field);
    }

    #[test]
    fn overrides_replace_file_values() {
        let mut s = Settings::parse("case = tc3\ncells = 50").unwrap();
        s.set("cells", "200").unwrap();
        assert_eq!(s.finish().unwrap().0.cells, Some(Cells::Line(200)));
    }

    #[test]
    fn rejections() {
        assert!(Settings::parse("case tc1").is_err());
        assert!(Settings::parse("colour = red").is_err());
        let bad = |text: &str| Settings::parse(text).unwrap().finish().is_err();
        assert!(bad("scheme = kfds"));
        assert!(bad("case = tc1\ncfl = 1.2"));
        assert!(bad("case = tc1\ncfl = 0"));
        assert!(bad("case = tc1\nscheme = kfds\nlambda = rh"));
        assert!(bad("case = tc1\ncells = 10x10"));
        assert!(bad("case = tc14\neoc = true"));
        assert!(bad("case = tc9\neoc = true"));
        assert!(bad("case = tc1\ngrids = 10,20"));
        assert!(bad("case = tc1\ninner_depth = 3"));
        assert!(bad("case = tc1\nformat = bin"));
        assert!(bad("case = tc14\nwhat = norms"));
    }

    #[test]
    fn square_cells_for_planar_cases() {
        let (cfg, _) = Settings::parse("case = tc13\ncells = 32").unwrap().finish().unwrap();
        assert_eq!(cfg.cells, Some(Cells::Plane(32, 32)));
    }

    #[test]
    fn default_path_names() {
        let (cfg, out) = Settings::parse("case = tc5\nscheme = kfds+").unwrap().finish().unwrap();
        assert_eq!(out.resolved_path(&cfg), PathBuf::from("tc5-kfdsplus-field.csv"));
    }

    #[test]
    fn missing_output_directory_is_io() {
        let err = Settings::parse("case = tc1\nout = /nonexistent/dir/f.csv").unwrap().finish().unwrap_err();
        assert!(err.is_io());
    }
}
