use std::fs;
use std::process::{Command, Output};

use laml_core::sweep::{read_csv, CSV_HEADER};

fn laml(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laml")).args(args).output().unwrap()
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"theta": 0.3, "psi": -1}"#).unwrap();
    let out = laml(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("theta") && err.contains("psi"), "{err}");

    fs::write(&path, r#"{"n_sensorz": 3}"#).unwrap();
    assert_eq!(laml(&["run", "--config", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(laml(&["run", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
}

#[test]
fn unknown_preset_exits_with_two() {
    let out = laml(&["sweep", "--preset", "fig7"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig7"));
}

#[test]
fn run_writes_one_summary_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"n_sensors": 10, "n_targets": 5, "trials": 3}"#).unwrap();
    let csv = dir.path().join("out.csv");
    let out = laml(&["run", "--config", cfg.to_str().unwrap(), "--algorithm", "greedy", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].algorithm, "greedy_msc");
    assert_eq!(rows[0].trials, 3);
    assert_eq!(rows[0].master_seed, 0x5EED);
}

#[test]
fn custom_sweep_writes_labelled_file() {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.json");
    fs::write(
        &grid,
        r#"{"base": {"n_sensors": 8, "n_targets": 4, "trials": 2}, "grids": [{"sensing_range": [150, 250], "algorithms": ["laml", "greedy_msc"]}]}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("csv");
    let out = laml(&["sweep", "--preset", "custom", "--grid", grid.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_csv(fs::File::open(out_dir.join("custom.csv")).unwrap()).unwrap();
    let points: Vec<_> = rows.iter().map(|r| (r.sensing_range, r.algorithm.as_str())).collect();
    assert_eq!(points, vec![(150.0, "laml"), (150.0, "greedy_msc"), (250.0, "laml"), (250.0, "greedy_msc")]);
}

#[test]
fn oracle_reports_bounds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scenario.json");
    fs::write(
        &path,
        r#"{"area_side": 100, "comm_radius": 30,
            "sensors": [{"id": 0, "x": 15, "y": 0, "range": 10.5}, {"id": 1, "x": 35, "y": 0, "range": 10.5},
                        {"id": 2, "x": 0, "y": 0, "range": 10.5}, {"id": 3, "x": 50, "y": 0, "range": 10.5}],
            "targets": [{"id": 0, "x": 5, "y": 0}, {"id": 1, "x": 25, "y": 0}, {"id": 2, "x": 45, "y": 0}]}"#,
    )
    .unwrap();
    let out = laml(&["oracle", "--scenario", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "sensors=4");
    assert_eq!(lines[1], "targets=3");
    assert_eq!(lines[2], "upper_bound=2");
    assert!(lines[3].starts_with("greedy_msc_lifetime="));
    assert_eq!(lines[4], "max_disjoint_covers=2");
    assert_eq!(lines[5], "disjoint_cover_lifetime=2");
}
