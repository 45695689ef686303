use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn flexkin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flexkin"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn no_arguments_prints_usage() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(&[], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Usage") || stdout(&o).contains("Usage"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(&["--case", "tc1", "--bogus"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_values_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["--case", "tc99"][..],
        &["--case", "tc1", "--scheme", "roe"],
        &["--case", "tc1", "--lambda", "fast"],
        &["--case", "tc1", "--cells", "10x10"],
        &["--case", "tc1", "--cfl", "1.5"],
        &["--case", "tc1", "--format", "bin"],
    ] {
        let o = flexkin(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn eoc_without_an_oracle_is_explained() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(&["--case", "tc14", "--eoc"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("exact solution"), "{}", stderr(&o));
}

#[test]
fn missing_output_directory_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("absent").join("f.csv");
    let o = flexkin(&["--case", "tc3", "--out", out.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn step_cap_is_a_divergence() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(&["--case", "tc4", "--scheme", "klw", "--tfinal", "100", "--max-steps", "3"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("error"));
}

#[test]
fn scalar_run_writes_field_and_norms() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(
        &["--case", "tc3", "--scheme", "kfds", "--cells", "100", "--tfinal", "0.3", "--out", "f.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o);
    assert!(line.contains("L1=") && line.contains("L2="), "{line}");
    let text = fs::read_to_string(dir.path().join("f.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,u_num,u_exact"));
    assert_eq!(lines.count(), 100);
    assert!(!text.contains('\r'));
    assert!(dir.path().join("f.csv.meta.json").exists());
}

#[test]
fn default_output_name_follows_case_and_scheme() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(&["--case", "tc8a", "--scheme", "tvd+"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("tc8a-tvdplus-field.csv")).unwrap();
    assert!(text.starts_with("x,u_num,u_exact\n"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.cfg"), "# base\ncase = tc3\nscheme = klw\ncells = 40\n").unwrap();
    let o = flexkin(&["--config", "run.cfg", "--cells", "60", "--out", "g.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("scheme=klw"));
    let text = fs::read_to_string(dir.path().join("g.csv")).unwrap();
    assert_eq!(text.lines().count(), 61);
}

#[test]
fn convergence_table_has_blank_first_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(
        &["--case", "sine", "--scheme", "tvd", "--eoc", "--grids", "20,40,80", "--out", "e.csv"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("e.csv")).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "n,dx,L1,L1_EOC,L2,L2_EOC");
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1].split(',').nth(3), Some(""));
    let order: f64 = rows[3].split(',').nth(3).unwrap().parse().unwrap();
    assert!(order > 1.5, "{order}");
}

#[test]
fn json_mirrors_the_records() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(&["--case", "tc1", "--cells", "50", "--format", "json", "--out", "f.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("f.json")).unwrap();
    assert!(text.contains("\"u_num\""), "{}", &text[..text.len().min(200)]);
    assert!(text.contains("\"case\""));
}

#[test]
fn dam_break_writes_forty_by_forty_depths() {
    let dir = tempfile::tempdir().unwrap();
    let o = flexkin(&["--case", "tc15", "--scheme", "kfds", "--out", "d.csv"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,h,hu,hv"));
    assert_eq!(lines.count(), 1600);
    let meta = fs::read_to_string(dir.path().join("d.csv.meta.json")).unwrap();
    assert!(meta.contains("inner_depth"));
}

#[test]
fn repeated_runs_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let o = flexkin(&["--case", "tc5", "--scheme", "tvd+", "--out", name], dir.path());
        assert_eq!(o.status.code(), Some(0));
    }
    let a = fs::read(dir.path().join("a.csv")).unwrap();
    let b = fs::read(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
}
