//! Field, norm and convergence-table files.
//!
//! Numbers are written with 17 significant digits so that a re-read value is
//! the same double. CSV uses ',' and LF with a header row; JSON carries the
//! same records plus run metadata, which CSV and binary outputs put in a
//! `.meta.json` sidecar.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::{Format, OutputSpec, RunConfig, What};
use crate::error::{Error, Result};
use crate::field::Field2D;
use crate::grid::Grid2D;
use crate::runner::{Artifact, Outcome, Summary};
use crate::verify::{ConvergenceReport, Eoc};

const BINARY_MAGIC: &str = "flexkin-field2d";

/// Shortest-safe round-trip text: 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Named equal-length columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(pairs: Vec<(&str, Vec<f64>)>) -> Result<Self> {
        let len = pairs.first().map_or(0, |p| p.1.len());
        if pairs.iter().any(|p| p.1.len() != len) {
            return Err(Error::Harness("table columns differ in length".into()));
        }
        let (headers, columns) = pairs.into_iter().map(|(h, c)| (h.to_string(), c)).unzip();
        Ok(Self { headers, columns })
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers.iter().position(|h| h == name).map(|i| self.columns[i].as_slice())
    }
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub fn write_table_csv<W: Write>(w: W, t: &Table) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(&t.headers)?;
    for i in 0..t.rows() {
        out.write_record(t.columns.iter().map(|c| fmt17(c[i])))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_table_csv<R: Read>(r: R) -> Result<Table> {
    let mut rd = csv::ReaderBuilder::new().from_reader(r);
    let headers: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    let mut columns = vec![Vec::new(); headers.len()];
    for rec in rd.records() {
        let rec = rec?;
        for (c, field) in columns.iter_mut().zip(rec.iter()) {
            c.push(
                field
                    .trim()
                    .parse()
                    .map_err(|_| Error::Harness(format!("not a number: '{field}'")))?,
            );
        }
    }
    Ok(Table { headers, columns })
}

/// Records as `[{header: value, ...}, ...]`.
pub fn table_records(t: &Table) -> Value {
    let rows = (0..t.rows())
        .map(|i| {
            let mut m = Map::new();
            for (h, c) in t.headers.iter().zip(&t.columns) {
                m.insert(h.clone(), json!(c[i]));
            }
            Value::Object(m)
        })
        .collect();
    Value::Array(rows)
}

fn write_json<W: Write>(mut w: W, v: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, v)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// A one-line text header followed by the cell data as little-endian f64,
/// row-major with x fastest and components interleaved.
pub fn write_field2d_binary<W: Write>(mut w: W, f: &Field2D) -> Result<()> {
    let g = &f.grid;
    writeln!(
        w,
        "{BINARY_MAGIC} nx={} ny={} ncomp={} x0={} x1={} y0={} y1={} t={}",
        g.nx(),
        g.ny(),
        f.ncomp,
        fmt17(g.x.x_min),
        fmt17(g.x.x_max),
        fmt17(g.y.x_min),
        fmt17(g.y.x_max),
        fmt17(f.t)
    )?;
    for v in &f.data {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_field2d_binary<R: Read>(r: R) -> Result<Field2D> {
    let mut r = BufReader::new(r);
    let mut header = String::new();
    r.read_line(&mut header)?;
    let mut parts = header.split_whitespace();
    if parts.next() != Some(BINARY_MAGIC) {
        return Err(Error::Harness("not a 2D field file".into()));
    }
    let mut kv = std::collections::HashMap::new();
    for p in parts {
        if let Some((k, v)) = p.split_once('=') {
            kv.insert(k, v);
        }
    }
    let get = |k: &str| -> Result<&str> {
        kv.get(k).copied().ok_or_else(|| Error::Harness(format!("header lacks {k}")))
    };
    let int = |k: &str| -> Result<usize> { get(k)?.parse().map_err(|_| Error::Harness(format!("bad {k}"))) };
    let real = |k: &str| -> Result<f64> { get(k)?.parse().map_err(|_| Error::Harness(format!("bad {k}"))) };
    let grid = Grid2D::new((real("x0")?, real("x1")?), (real("y0")?, real("y1")?), int("nx")?, int("ny")?)?;
    let ncomp = int("ncomp")?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != grid.n_cells() * ncomp * 8 {
        return Err(Error::Harness(format!("expected {} values, found {} bytes", grid.n_cells() * ncomp, bytes.len())));
    }
    let data = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Ok(Field2D {
        grid,
        ncomp,
        data,
        t: real("t")?,
    })
}

fn eoc_text(e: Option<&Eoc>) -> String {
    match e {
        None => String::new(),
        Some(Eoc::Order(p)) => fmt17(*p),
        Some(Eoc::Exact) => "exact".into(),
    }
}

/// Columns n, dx, L1, L1_EOC, L2, L2_EOC; the first row has empty orders.
pub fn write_eoc_csv<W: Write>(w: W, r: &ConvergenceReport) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["n", "dx", "L1", "L1_EOC", "L2", "L2_EOC"])?;
    for (i, row) in r.rows.iter().enumerate() {
        let prev = i.checked_sub(1);
        out.write_record([
            row.n_cells.to_string(),
            fmt17(row.dx),
            fmt17(row.l1),
            eoc_text(prev.and_then(|p| r.l1_eoc.get(p))),
            fmt17(row.l2),
            eoc_text(prev.and_then(|p| r.l2_eoc.get(p))),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// The field table of a finished run; 2D fields list x, y then components.
pub fn field_table(a: &Artifact) -> Result<Table> {
    match a {
        Artifact::Scalar1D(run) => {
            let mut cols = vec![("x", run.field.grid.centers()), ("u_num", run.field.u.clone())];
            if let Some(ex) = &run.exact {
                cols.push(("u_exact", ex.clone()));
            }
            Table::new(cols)
        }
        Artifact::Swe1D(run) => {
            let s = &run.state;
            let eta = s.h.iter().zip(&s.bed).map(|(h, b)| h + b).collect();
            Table::new(vec![
                ("x", s.grid.centers()),
                ("h", s.h.clone()),
                ("hu", s.hu.clone()),
                ("u", s.velocity()),
                ("bed", s.bed.clone()),
                ("eta", eta),
            ])
        }
        Artifact::Scalar2D(run) => {
            let (x, y) = planar_coords(&run.field.grid);
            let mut cols = vec![("x", x), ("y", y), ("u_num", run.field.data.clone())];
            if let Some(ex) = &run.exact {
                cols.push(("u_exact", ex.clone()));
            }
            Table::new(cols)
        }
        Artifact::Swe2D(run) => {
            let (x, y) = planar_coords(&run.field.grid);
            Table::new(vec![
                ("x", x),
                ("y", y),
                ("h", run.field.component(0)),
                ("hu", run.field.component(1)),
                ("hv", run.field.component(2)),
            ])
        }
        Artifact::Study(_) => Err(Error::Harness("a convergence study has no field".into())),
    }
}

fn planar_coords(g: &Grid2D) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::with_capacity(g.n_cells());
    let mut y = Vec::with_capacity(g.n_cells());
    for k in 0..g.ny() {
        for j in 0..g.nx() {
            x.push(g.x.center(j as isize));
            y.push(g.y.center(k as isize));
        }
    }
    (x, y)
}

#[derive(Serialize)]
struct Meta<'a> {
    config: &'a RunConfig,
    summary: &'a Summary,
}

fn meta_value(cfg: &RunConfig, s: &Summary) -> Result<Value> {
    Ok(serde_json::to_value(Meta { config: cfg, summary: s })?)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Writes the requested artifact; returns the paths written.
pub fn write_outcome(out: &Outcome, cfg: &RunConfig, spec: &OutputSpec) -> Result<Vec<PathBuf>> {
    let path = spec.resolved_path(cfg);
    let meta = meta_value(cfg, &out.summary)?;
    let table = match (spec.what, &out.artifact) {
        (What::EocTable, Artifact::Study(r)) => {
            match spec.format {
                Format::Csv => write_eoc_csv(create(&path)?, r)?,
                Format::Json => write_json(create(&path)?, &json!({ "meta": meta, "report": r }))?,
                Format::Bin => return Err(Error::Config("binary output is only for 2D fields".into())),
            }
            return finish_with_sidecar(path, spec.format, &meta);
        }
        (What::EocTable, _) | (_, Artifact::Study(_)) => {
            return Err(Error::Config("eoc-table output pairs with --eoc".into()));
        }
        (What::Norms, _) => {
            let (l1, l2) = match (out.summary.l1, out.summary.l2) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Error::Config(format!("{} has no exact solution", cfg.case))),
            };
            Table::new(vec![("t", vec![out.summary.t]), ("L1", vec![l1]), ("L2", vec![l2])])?
        }
        (What::Field, a) => field_table(a)?,
    };
    match spec.format {
        Format::Csv => write_table_csv(create(&path)?, &table)?,
        Format::Json => write_json(create(&path)?, &json!({ "meta": meta, "records": table_records(&table) }))?,
        Format::Bin => {
            let f = match &out.artifact {
                Artifact::Scalar2D(r) => &r.field,
                Artifact::Swe2D(r) => &r.field,
                _ => return Err(Error::Config("binary output is only for 2D fields".into())),
            };
            write_field2d_binary(create(&path)?, f)?;
        }
    }
    finish_with_sidecar(path, spec.format, &meta)
}

fn finish_with_sidecar(path: PathBuf, format: Format, meta: &Value) -> Result<Vec<PathBuf>> {
    if format == Format::Json {
        return Ok(vec![path]);
    }
    let side = sidecar_path(&path);
    write_json(create(&side)?, meta)?;
    Ok(vec![path, side])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cases::CaseId;
    use crate::solver1d::SchemeKind;
    use crate::verify::GridError;
    use crate::wavespeed::WaveSpeedMode;
    use proptest::prelude::*;

    #[test]
    fn csv_layout() {
        let t = Table::new(vec![("x", vec![0.5, 1.5]), ("u", vec![1.0, -0.1])]).unwrap();
        let mut buf = Vec::new();
        write_table_csv(&mut buf, &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,u\n"));
        assert!(!text.contains('\r'));
        assert_eq!(text.lines().count(), 3);
        assert_eq!(read_table_csv(text.as_bytes()).unwrap(), t);
    }

    #[test]
    fn unequal_columns_rejected() {
        assert!(Table::new(vec![("a", vec![1.0]), ("b", vec![])]).is_err());
    }

    #[test]
    fn binary_round_trip() {
        let g = Grid2D::new((0.0, 2.0), (-1.0, 1.0), 5, 4).unwrap();
        let mut f = Field2D::from_fn(g, 3, |x, y| vec![x, y, x * y / 3.0]);
        f.t = 0.1;
        let mut buf = Vec::new();
        write_field2d_binary(&mut buf, &f).unwrap();
        assert_eq!(read_field2d_binary(buf.as_slice()).unwrap(), f);
        assert!(read_field2d_binary(&b"junk\n"[..]).is_err());
    }

    #[test]
    fn eoc_table_columns() {
        let rows = vec![
            GridError { n_cells: 20, dx: 0.05, l1: 0.4, l2: 0.4 },
            GridError { n_cells: 40, dx: 0.025, l1: 0.1, l2: 0.0 },
        ];
        let r = ConvergenceReport {
            case: CaseId::Sine,
            scheme: SchemeKind::Kfds,
            mode: WaveSpeedMode::Ce,
            rows,
            l1_eoc: vec![Eoc::Order(2.0)],
            l2_eoc: vec![Eoc::Exact],
            failure: None,
        };
        let mut buf = Vec::new();
        write_eoc_csv(&mut buf, &r).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "n,dx,L1,L1_EOC,L2,L2_EOC");
        assert!(lines[1].starts_with("20,") && lines[1].contains(",,"));
        assert!(lines[2].contains("2.0000000000000000e0") && lines[2].ends_with("exact"));
    }

    proptest! {
        #[test]
        fn seventeen_digits_round_trip(bits in any::<u64>()) {
            let v = f64::from_bits(bits);
            prop_assume!(v.is_finite());
            let back: f64 = fmt17(v).parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
        }

        #[test]
        fn tables_round_trip(vals in prop::collection::vec(-1e300f64..1e300, 1..30)) {
            let t = Table::new(vec![("x", vals.clone()), ("y", vals.iter().map(|v| v * 1e-10).collect())]).unwrap();
            let mut buf = Vec::new();
            write_table_csv(&mut buf, &t).unwrap();
            prop_assert_eq!(read_table_csv(buf.as_slice()).unwrap(), t);
        }
    }
}
