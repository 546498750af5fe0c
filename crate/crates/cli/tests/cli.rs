use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intersectlab"))
        .args(args)
        .env_remove("INTERSECTLAB_CAP")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

#[test]
fn search_reports_optimum_as_json() {
    let o = run(&["search", "max", "--n", "7", "--k", "3", "--r", "3", "--t", "2", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["optimum"], "5");
    assert_eq!(v["all_optima_are_t_stars"], true);
    assert_eq!(v["witness"]["size"], 5);
}

#[test]
fn nonuniform_search_without_k() {
    let o = run(&["search", "max", "--n", "5", "--r", "3", "--t", "2", "--nontrivial", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], serde_json::Value::Null);
}

#[test]
fn walk_alpha_prints_truncated_digits() {
    let o = run(&["walk", "alpha", "--r", "3", "--tol", "1e-12"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "decimal 0.618033988749");
}

#[test]
fn family_round_trip_through_file() {
    let path = scratch("frankl.txt");
    let p = path.to_str().unwrap();
    let built = run(&["family", "build", "--kind", "frankl", "--n", "8", "--k", "4", "--r", "3", "--t", "2", "--i", "1", "--out", p]);
    assert!(built.status.success());
    let text = fs::read_to_string(&path).unwrap();

    let checked = run(&["family", "check", "--input", p, "--r", "3", "--t", "2", "--json"]);
    assert!(checked.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&checked)).unwrap();
    assert_eq!(v["rwise_t_intersecting"], true);
    assert_eq!(v["t_star"], false);
    assert_eq!(v["shifted"], true);
    assert_eq!(v["size"], text.lines().count() - 1);

    let size = run(&["family", "build", "--kind", "frankl", "--n", "8", "--k", "4", "--r", "3", "--t", "2", "--i", "1", "--size-only"]);
    assert_eq!(stdout(&size).trim(), v["size"].to_string());

    let shifted = run(&["shift", "--input", p, "--fixpoint"]);
    assert_eq!(stdout(&shifted), text);
    fs::remove_file(&path).ok();
}

#[test]
fn shift_then_saturate() {
    let path = scratch("pair.txt");
    fs::write(&path, "n=5 k=3\n2,3,4\n2,3,5\n").unwrap();
    let p = path.to_str().unwrap();
    let shifted = run(&["shift", "--input", p, "--i", "1", "--j", "2"]);
    assert_eq!(stdout(&shifted), "n=5 k=3\n1,3,4\n1,3,5\n");
    let sat = run(&["saturate", "--input", p, "--r", "2", "--t", "2", "--json"]);
    assert!(sat.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&sat)).unwrap();
    assert_eq!(v["size"], 3);
    fs::remove_file(&path).ok();
}

#[test]
fn invalid_parameters_exit_two() {
    let o = run(&["walk", "alpha", "--r", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "invalid_input");

    let o = run(&["search", "max", "--n", "5", "--k", "9", "--r", "1", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));

    let path = scratch("bad.txt");
    fs::write(&path, "n=4 k=2\n1,7\n").unwrap();
    let o = run(&["family", "check", "--input", path.to_str().unwrap(), "--r", "2", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    fs::remove_file(&path).ok();

    assert_eq!(run(&["search", "max", "--n", "5"]).status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_three_with_structured_error() {
    let o = run(&["search", "max", "--n", "30", "--k", "15", "--r", "3", "--t", "2"]);
    assert_eq!(o.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "cap_exceeded");
    assert_eq!(err["cap"], "300");
    assert_eq!(err["value"], "155117520");

    let o = run(&["search", "max", "--n", "7", "--k", "3", "--r", "3", "--t", "2", "--cap", "10"]);
    assert_eq!(o.status.code(), Some(3));

    let env_capped = Command::new(env!("CARGO_BIN_EXE_intersectlab"))
        .args(["search", "max", "--n", "7", "--k", "3", "--r", "3", "--t", "2"])
        .env("INTERSECTLAB_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(env_capped.status.code(), Some(3));
}

#[test]
fn verify_exit_status_tracks_suite_result() {
    let ok = run(&["verify", "--suite", "lattice-path-oracle"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("PASS"));

    let failing = run(&["verify", "--suite", "a1-versus-star"]);
    assert_eq!(failing.status.code(), Some(1));
    assert!(stdout(&failing).contains("FAIL"));

    assert_eq!(run(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn threshold_scan_csv_header() {
    let o = run(&["threshold", "scan-a1", "--k", "6", "--r", "3", "--t", "1", "--from", "6", "--to", "12", "--csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,A1,star,sign"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn output_is_deterministic() {
    let args = ["search", "max", "--n", "8", "--k", "4", "--r", "3", "--t", "1", "--nontrivial", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
