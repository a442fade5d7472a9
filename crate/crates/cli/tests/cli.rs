use std::path::PathBuf;
use std::process::Command as Process;

use clap::Parser;
use serde_json::{json, Value};

use iqprob_cli::{execute, Cli, EXIT_INVALID, EXIT_OK, EXIT_PROPERTY_FAIL, SCHEMA};

struct Workdir {
    root: PathBuf,
}

impl Workdir {
    fn new(tag: &str) -> Self {
        let root = std::env::temp_dir().join(format!("iqprob-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&root).unwrap();
        Self { root }
    }

    fn file(&self, name: &str, value: &Value) -> String {
        let path = self.root.join(name);
        std::fs::write(&path, value.to_string()).unwrap();
        path.display().to_string()
    }

    fn raw(&self, name: &str, contents: &str) -> String {
        let path = self.root.join(name);
        std::fs::write(&path, contents).unwrap();
        path.display().to_string()
    }
}

impl Drop for Workdir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.root);
    }
}

fn matrix(entries: &[&[f64]]) -> Value {
    let n = entries.len();
    json!({
        "dim": n,
        "entries": entries
            .iter()
            .map(|row| row.iter().map(|&x| [x, 0.0]).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn run(argv: &[&str]) -> (i32, String, String) {
    let mut full = vec!["iqprob"];
    full.extend_from_slice(argv);
    let cli = Cli::try_parse_from(full).unwrap();
    let outcome = execute(cli);
    (outcome.exit, outcome.stdout, outcome.stderr)
}

fn run_json(argv: &[&str]) -> (i32, Value) {
    let (exit, stdout, stderr) = run(argv);
    assert!(stderr.is_empty(), "unexpected stderr: {stderr}");
    (exit, serde_json::from_str(&stdout).unwrap())
}

#[test]
fn bounds_of_commuting_pair_collapse_to_the_product() {
    let w = Workdir::new("bounds");
    let p = w.file("p.json", &matrix(&[&[1.0, 0.0], &[0.0, 0.0]]));
    let q = w.file("q.json", &matrix(&[&[1.0, 0.0], &[0.0, 1.0]]));
    let (exit, out) = run_json(&["bounds", &p, &q]);
    assert_eq!(exit, EXIT_OK);
    assert_eq!(out["schema"], SCHEMA);
    assert_eq!(out["command"], "bounds");
    let result = &out["result"];
    assert_eq!(result["lower"], result["upper"]);
    assert_eq!(result["lower"], matrix(&[&[1.0, 0.0], &[0.0, 0.0]]));
    assert_eq!(result["lower_rank"], 1);
}

#[test]
fn interval_of_maximally_mixed_state_matches_the_overlap() {
    let w = Workdir::new("interval");
    let rho = w.file("rho.json", &matrix(&[&[0.5, 0.0], &[0.0, 0.5]]));
    let p = w.file("p.json", &matrix(&[&[1.0, 0.0], &[0.0, 0.0]]));
    let q = w.file("q.json", &matrix(&[&[0.5, 0.5], &[0.5, 0.5]]));
    let (exit, out) = run_json(&["interval", &rho, &p, &q]);
    assert_eq!(exit, EXIT_OK);
    let iv = &out["result"]["interval"];
    assert!(iv["lower"].as_f64().unwrap().abs() < 1e-12);
    assert!((iv["upper"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn non_idempotent_input_is_a_validation_error() {
    let w = Workdir::new("notproj");
    let p = w.file("p.json", &matrix(&[&[0.3, 0.0], &[0.0, 0.0]]));
    let q = w.file("q.json", &matrix(&[&[1.0, 0.0], &[0.0, 0.0]]));
    let (exit, stdout, stderr) = run(&["bounds", &p, &q]);
    assert_eq!(exit, EXIT_INVALID);
    assert!(stdout.is_empty());
    let err: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(err["schema"], SCHEMA);
    assert_eq!(err["error"]["code"], "not_idempotent");
    assert_eq!(err["error"]["path"].as_str().unwrap(), p);
}

#[test]
fn malformed_json_and_missing_files_report_distinct_codes() {
    let w = Workdir::new("badfile");
    let bad = w.raw("bad.json", "{not json");
    let good = w.file("q.json", &matrix(&[&[1.0]]));
    let (exit, _, stderr) = run(&["bounds", &bad, &good]);
    assert_eq!(exit, EXIT_INVALID);
    let err: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(err["error"]["code"], "malformed");

    let missing = w.root.join("absent.json").display().to_string();
    let (exit, _, stderr) = run(&["bounds", &missing, &good]);
    assert_eq!(exit, EXIT_INVALID);
    let err: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(err["error"]["code"], "io");
}

#[test]
fn unknown_intersection_method_is_rejected() {
    let w = Workdir::new("method");
    let p = w.file("p.json", &matrix(&[&[1.0]]));
    let (exit, _, stderr) = run(&["bounds", &p, &p, "--method", "bogus"]);
    assert_eq!(exit, EXIT_INVALID);
    assert!(!stderr.is_empty());
}

#[test]
fn axioms_output_is_byte_identical_across_runs() {
    let w = Workdir::new("determinism");
    let p = w.file("p.json", &matrix(&[&[1.0, 0.0], &[0.0, 0.0]]));
    let q = w.file("q.json", &matrix(&[&[0.5, 0.5], &[0.5, 0.5]]));
    let argv = ["axioms", &p, &q, "--samples", "16", "--seed", "42"];
    let (exit_a, out_a, _) = run(&argv);
    let (exit_b, out_b, _) = run(&argv);
    assert_eq!(exit_a, EXIT_OK);
    assert_eq!(exit_a, exit_b);
    assert_eq!(out_a, out_b);
    let parsed: Value = serde_json::from_str(&out_a).unwrap();
    assert_eq!(parsed["result"]["all_pass"], true);
}

#[test]
fn nogo_flags_mutually_unbiased_qubit_resolutions() {
    let w = Workdir::new("nogo");
    let z = w.file(
        "z.json",
        &json!([matrix(&[&[1.0, 0.0], &[0.0, 0.0]]), matrix(&[&[0.0, 0.0], &[0.0, 1.0]])]),
    );
    let x = w.file(
        "x.json",
        &json!([matrix(&[&[0.5, 0.5], &[0.5, 0.5]]), matrix(&[&[0.5, -0.5], &[-0.5, 0.5]])]),
    );
    let (exit, out) = run_json(&["nogo", &z, &x]);
    assert_eq!(exit, EXIT_OK);
    let result = &out["result"];
    assert_eq!(result["no_go"], true);
    assert_eq!(result["forced_zero"].as_array().unwrap().len(), 4);
}

#[test]
fn twotime_table_sums_to_one_in_every_order() {
    let w = Workdir::new("twotime");
    let rho = w.file("rho.json", &matrix(&[&[0.5, 0.0], &[0.0, 0.5]]));
    let z = w.file(
        "z.json",
        &json!([matrix(&[&[1.0, 0.0], &[0.0, 0.0]]), matrix(&[&[0.0, 0.0], &[0.0, 1.0]])]),
    );
    let x = w.file(
        "x.json",
        &json!([matrix(&[&[0.5, 0.5], &[0.5, 0.5]]), matrix(&[&[0.5, -0.5], &[-0.5, 0.5]])]),
    );
    for order in ["pq", "qp", "mean"] {
        let (exit, out) = run_json(&["twotime", &rho, &z, &x, "--order", order]);
        assert_eq!(exit, EXIT_OK);
        let total = out["result"]["total"].as_f64().unwrap();
        assert!((total - 1.0).abs() < 1e-12, "order {order}: total {total}");
    }
    let (exit, _, _) = run(&["twotime", &rho, &z, &x, "--order", "bogus"]);
    assert_eq!(exit, EXIT_INVALID);
}

#[test]
fn classical_grades_measures_and_envelopes_credal_sets() {
    let w = Workdir::new("classical");
    let credal = w.file(
        "credal.json",
        &json!({ "n": 2, "distributions": [[0.5, 0.5], [0.25, 0.75]] }),
    );
    let (exit, out) = run_json(&["classical", &credal]);
    assert_eq!(exit, EXIT_OK);
    assert_eq!(out["result"]["all_pass"], true);

    let broken = w.file(
        "broken.json",
        &json!({ "n": 2, "lower": [0.0, 0.6, 0.6, 1.0], "upper": [0.0, 0.7, 0.7, 1.0] }),
    );
    let (exit, stdout, _) = run(&["classical", &broken]);
    assert_eq!(exit, EXIT_PROPERTY_FAIL);
    let parsed: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(parsed["result"]["all_pass"], false);
}

#[test]
fn spin1_reproduction_passes_and_reports_every_table() {
    let (exit, out) = run_json(&["spin1", "--reproduce"]);
    assert_eq!(exit, EXIT_OK);
    assert_eq!(out["result"]["all_pass"], true);
    assert!(out["result"]["rows"].as_array().unwrap().len() >= 5);
    assert!(out["result"]["max_deviation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn tolerance_override_relaxes_validation() {
    let w = Workdir::new("tol");
    let near = w.file("near.json", &matrix(&[&[0.999, 0.0], &[0.0, 0.0]]));
    let q = w.file("q.json", &matrix(&[&[1.0, 0.0], &[0.0, 0.0]]));
    let (exit, _, stderr) = run(&["interval", &near, &q, &q]);
    assert_eq!(exit, EXIT_INVALID);
    let err: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(err["error"]["code"], "trace_not_one");
    let (exit, _, _) = run(&["--tol", "0.01", "interval", &near, &q, &q]);
    assert_eq!(exit, EXIT_OK);
    let (exit, _, stderr) = run(&["--tol=-1.0", "interval", &near, &q, &q]);
    assert_eq!(exit, EXIT_INVALID);
    let err: Value = serde_json::from_str(&stderr).unwrap();
    assert_eq!(err["error"]["code"], "invalid_tolerance");
}

#[test]
fn pretty_output_is_human_text() {
    let w = Workdir::new("pretty");
    let p = w.file("p.json", &matrix(&[&[1.0, 0.0], &[0.0, 0.0]]));
    let q = w.file("q.json", &matrix(&[&[0.5, 0.5], &[0.5, 0.5]]));
    let (exit, stdout, _) = run(&["--output", "pretty", "decompose", &p, &q]);
    assert_eq!(exit, EXIT_OK);
    assert!(stdout.starts_with("blocks:"));
    assert!(serde_json::from_str::<Value>(&stdout).is_err());
}

#[test]
fn binary_smoke_test_round_trips_the_schema() {
    let out = Process::new(env!("CARGO_BIN_EXE_iqprob"))
        .args(["spin1", "--reproduce"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let parsed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["schema"], SCHEMA);
    assert_eq!(parsed["result"]["all_pass"], true);
}
