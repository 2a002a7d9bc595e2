use std::path::Path;
use std::process::{Command, Output};

const HEXAGON: &str = r#"{"kind": "polytope", "dim": 2,
  "normals": [[1, 0], [0.5, 0.8660254037844386], [-0.5, 0.8660254037844386]],
  "support": [1, 1.2, 0.9]}"#;

fn idcm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idcm")).current_dir(dir).args(args).output().expect("run idcm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn with_hexagon() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("hex.json"), HEXAGON).unwrap();
    dir
}

#[test]
fn help_lists_subcommands() {
    let dir = tempfile::tempdir().unwrap();
    let o = idcm(dir.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for cmd in ["ip-body", "ip-measure", "transform", "solve", "verify", "concentration", "sandwich", "limits"] {
        assert!(text.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn p_outside_range_is_usage_error() {
    let dir = with_hexagon();
    for p in ["0", "1", "1.5"] {
        let o = idcm(dir.path(), &["ip-body", "--p", p, "--in", "hex.json"]);
        assert_eq!(o.status.code(), Some(2), "p = {p}");
        assert!(stderr(&o).contains("p must lie in"), "{}", stderr(&o));
    }
}

#[test]
fn missing_and_malformed_files_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let o = idcm(dir.path(), &["ip-body", "--p", "0.5", "--in", "nope.json"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("file not found"));

    std::fs::write(dir.path().join("bad.json"), "{\"kind\": \"polytope\", \"dim\": 2").unwrap();
    assert_eq!(idcm(dir.path(), &["ip-body", "--p", "0.5", "--in", "bad.json"]).status.code(), Some(3));

    std::fs::write(dir.path().join("zero.json"), r#"{"kind": "polytope", "dim": 2, "normals": [[1, 0], [0, 1]], "support": [1, 0]}"#)
        .unwrap();
    let o = idcm(dir.path(), &["ip-body", "--p", "0.5", "--in", "zero.json"]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn ip_body_writes_radial_csv() {
    let dir = with_hexagon();
    let o = idcm(dir.path(), &["ip-body", "--p", "-1", "--in", "hex.json", "--grid", "90"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("volume"));
    let csv = std::fs::read_to_string(dir.path().join("radial.csv")).unwrap();
    assert!(csv.starts_with("# config:"));
    assert!(csv.contains("rho"));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 91);
}

#[test]
fn both_routes_report_their_difference() {
    let dir = with_hexagon();
    let o = idcm(dir.path(), &["ip-measure", "--p", "0.5", "--in", "hex.json", "--route", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("route difference: max atom relative"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("measure.json")).unwrap()).unwrap();
    assert_eq!(doc["config"]["command"], "ip-measure");
    assert_eq!(doc["config"]["p"], 0.5);
    assert_eq!(doc["atoms"].as_array().unwrap().len(), 6);
}

#[test]
fn measure_solves_back_to_a_body() {
    let dir = with_hexagon();
    assert_eq!(idcm(dir.path(), &["ip-measure", "--p", "-1", "--in", "hex.json", "--out", "mu.json"]).status.code(), Some(0));
    let o = idcm(dir.path(), &["solve", "--p", "-1", "--measure", "mu.json", "--out", "body.json", "--trace", "trace.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("status converged"));
    assert!(text.lines().any(|l| l.starts_with("c ")));
    assert!(text.lines().any(|l| l.starts_with("residual ")));
    assert!(dir.path().join("trace.csv").exists());

    let o = idcm(dir.path(), &["ip-measure", "--p", "-1", "--in", "body.json", "--out", "again.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let read = |f: &str| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(dir.path().join(f)).unwrap()).unwrap()
    };
    let (a, b) = (read("mu.json"), read("again.json"));
    let total = |v: &serde_json::Value| v["atoms"].as_array().unwrap().iter().map(|a| a["w"].as_f64().unwrap()).sum::<f64>();
    assert!((total(&a) - total(&b)).abs() < 0.02 * total(&a));
}

#[test]
fn sandwich_and_concentration_report() {
    let dir = with_hexagon();
    let o = idcm(dir.path(), &["sandwich", "--p", "0.5", "--in", "hex.json", "--grid", "180"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("holds"));

    let o = idcm(dir.path(), &["concentration", "--in", "hex.json", "--p", "0.5", "--subspace", "e1", "--bound", "ip", "--grid", "180"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("strict true"));
}

#[test]
fn limits_table_has_seven_rows() {
    let dir = with_hexagon();
    let o = idcm(dir.path(), &["limits", "--in", "hex.json", "--grid", "180"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let rows = stdout(&o).lines().filter(|l| !l.starts_with('#') && !l.starts_with("limit")).count();
    assert_eq!(rows, 7, "{}", stdout(&o));
}

#[test]
fn limits_suite_passes_and_writes_config_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = idcm(dir.path(), &["verify", "--suite", "limits", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    let first = csv.lines().next().unwrap();
    assert!(first.starts_with("# config:"));
    assert!(first.contains("\"seed\":42"));
}

#[test]
fn unknown_suite_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(idcm(dir.path(), &["verify", "--suite", "everything"]).status.code(), Some(2));
}
