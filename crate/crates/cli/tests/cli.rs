use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn models() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn mdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdt"))
        .args(args)
        .current_dir(models())
        .env_remove("MDT_CAP")
        .output()
        .expect("run mdt")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn verify_quantum_auto_branch() {
    let o = mdt(&["verify", "--model", "q1_quantum.qp", "--alpha", "1", "--prime", "3", "--set", "q=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    let r = &v["reports"][0];
    assert_eq!(r["predicted"], "5/2");
    assert_eq!(r["observed"], "5/2");
    assert_eq!(r["branch"], "generic");
    assert_eq!(r["order_q"], 2);
    assert!(r.get("elapsed_ms").is_none());
}

#[test]
fn verify_picks_root_branch_and_passes() {
    let o = mdt(&["verify", "--model", "q1_quantum.qp", "--alpha", "2", "--prime", "3", "--set", "q=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["reports"][0]["branch"], "root:2");
}

#[test]
fn forced_generic_branch_is_rejected() {
    let o = mdt(&[
        "verify", "--model", "q1_quantum.qp", "--alpha", "2", "--prime", "3", "--set", "q=2", "--branch", "generic",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("root:2"), "{}", stderr(&o));
}

#[test]
fn branch_needs_matching_order() {
    let o = mdt(&[
        "verify", "--model", "q1_quantum.qp", "--alpha", "2", "--prime", "5", "--set", "q=1", "--branch", "root:2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("order 2"), "{}", stderr(&o));
}

#[test]
fn timing_is_opt_in() {
    let o = mdt(&["verify", "--model", "q1_quantum.qp", "--alpha", "1", "--prime", "5", "--set", "q=2", "--timing"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["reports"][0]["elapsed_ms"].is_u64());
}

#[test]
fn conifold_series_mixed_coefficient() {
    let o = mdt(&["series", "--model", "conifold.qp", "--branch", "generic", "--truncate", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["vars"], 2);
    let c = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["alpha"] == serde_json::json!([1, 1]))
        .unwrap();
    assert_eq!(c["value"], "(3*L^2 - 3*L + 1)/(L^2 - 2*L + 1)");
}

#[test]
fn series_from_family_name() {
    let o = mdt(&["series", "--family", "jordan", "--truncate", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "alpha,value\n(0),1\n(1),L/(L - 1)\n");
}

#[test]
fn parse_error_reports_position() {
    let dir = std::env::temp_dir().join(format!("mdt-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.qp");
    std::fs::write(&path, "vertex v\narrow x: v -> v\npotential W = x*y\n").unwrap();
    let o = mdt(&["parse", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":3:17:"), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn missing_file_exits_two() {
    let o = mdt(&["parse", "--model", "no_such_model.qp"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_prints_relations() {
    let o = mdt(&["parse", "--model", "q1_quantum.qp"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["cut_valid"], true);
    assert_eq!(v["family"], "quantum-c3");
    assert_eq!(v["relations"][0], "x*y - q*y*x");
}

#[test]
fn invalid_cut_is_a_parse_error() {
    let dir = std::env::temp_dir().join(format!("mdt-cut-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("jordan_x.qp");
    let text = std::fs::read_to_string(models().join("q1_jordan.qp")).unwrap();
    let text: String = text
        .lines()
        .map(|l| if l.starts_with("cut") { "cut { x }" } else { l })
        .collect::<Vec<_>>()
        .join("\n");
    std::fs::write(&path, text + "\n").unwrap();
    let o = mdt(&["parse", "--model", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("jordan_x.qp:7:1: invalid cut"), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cap_exceeded_exits_three() {
    let o = mdt(&[
        "oracle-count", "--model", "q1_quantum.qp", "--alpha", "3", "--prime", "7", "--set", "q=2", "--cap", "1000",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cap"));
    let o = mdt(&[
        "verify", "--model", "q1_quantum.qp", "--alpha", "3", "--prime", "7", "--set", "q=2", "--cap", "1000",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn cap_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_mdt"))
        .args(["oracle-count", "--model", "q1_quantum.qp", "--alpha", "2", "--prime", "5", "--set", "q=2"])
        .args(["--engine", "exhaustive"])
        .current_dir(models())
        .env("MDT_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn counts_do_not_depend_on_jobs() {
    let base = [
        "oracle-count", "--model", "conifold.qp", "--degree", "2", "--prime", "3", "--set", "q=2", "--engine",
        "exhaustive",
    ];
    let one = mdt(&[&base[..], &["--jobs", "1"]].concat());
    let four = mdt(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn json_is_byte_stable() {
    let args = ["verify", "--model", "conifold.qp", "--degree", "2", "--prime", "5", "--set", "q=2"];
    let a = mdt(&args);
    let b = mdt(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["reports"].as_array().unwrap().len(), 5);
}

#[test]
fn table_and_csv_formats() {
    let base = ["verify", "--model", "q1_quantum.qp", "--alpha", "1", "--prime", "5,7", "--set", "q=2"];
    let t = mdt(&[&base[..], &["--format", "table"]].concat());
    let lines: Vec<&str> = std::str::from_utf8(&t.stdout).unwrap().lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("family"));
    assert!(lines[1].contains("9/4"));
    let c = mdt(&[&base[..], &["--format", "csv"]].concat());
    let text = stdout(&c);
    let header = text.lines().next().unwrap();
    assert!(header.split(',').any(|h| h == "predicted"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn factorization_holds_for_quantum() {
    let o = mdt(&["factorization-check", "--model", "q1_quantum.qp", "--prime", "3", "--all-q"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["runs"].as_array().unwrap().len(), 2);
    assert_eq!(v["nilpotent_strata"].as_array().unwrap().len(), 3);
}

#[test]
fn gen_cyclic_matches_shipped_file() {
    let o = mdt(&["gen-cyclic", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let shipped = std::fs::read_to_string(models().join("cyclic_2.qp")).unwrap();
    assert_eq!(stdout(&o), shipped);
}

#[test]
fn generated_cyclic_model_verifies() {
    let dir = std::env::temp_dir().join(format!("mdt-gen-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c1.qp");
    let o = mdt(&["gen-cyclic", "--n", "1", "--layout", "single", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let o = mdt(&["verify", "--model", path.to_str().unwrap(), "--alpha", "1,1", "--prime", "3", "--set", "q=2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    std::fs::remove_dir_all(&dir).unwrap();
}
