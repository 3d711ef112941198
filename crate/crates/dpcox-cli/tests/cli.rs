//! Command-line behaviour: exit codes, output formats and catalog selection.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

use dpcox_cli::{run, Output, EXIT_FAILURE, EXIT_OK, EXIT_USAGE};

const BUNDLED: &str = include_str!("../../dpcox/data/catalog.json");

fn dpcox(args: &[&str]) -> Output {
    run(std::iter::once("dpcox").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = dpcox(&all);
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", out.stdout))
}

/// Writes `contents` to a fresh file in a per-test temporary directory.
fn temp_catalog(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dpcox-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("catalog.json");
    std::fs::write(&path, contents).unwrap();
    path
}

/// The bundled catalog with one coefficient of the d6-A2 relation changed.
fn corrupted_catalog() -> String {
    let mut v: Value = serde_json::from_str(BUNDLED).unwrap();
    let case = v["cases"]
        .as_array_mut()
        .unwrap()
        .iter_mut()
        .find(|c| c["id"] == "d6-A2")
        .unwrap();
    let coeff = &mut case["relation"][0][0];
    let changed = coeff.as_str().unwrap().parse::<i64>().unwrap() + 2;
    *coeff = Value::from(changed.to_string());
    serde_json::to_string(&v).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(dpcox(&["enumerate", "--degree", "5"]).code, EXIT_OK);
    assert_eq!(dpcox(&["verify", "--case", "d6-A2"]).code, EXIT_OK);
    assert_eq!(dpcox(&["enumerate", "--degree", "9"]).code, EXIT_USAGE);
    assert_eq!(dpcox(&["verify"]).code, EXIT_USAGE);
    assert_eq!(
        dpcox(&["verify", "--case", "d6-A2", "--all"]).code,
        EXIT_USAGE
    );
    assert_eq!(
        dpcox(&["verify", "--case", "no-such-case"]).code,
        EXIT_USAGE
    );
    assert_eq!(dpcox(&["report"]).code, EXIT_USAGE);
    assert_eq!(dpcox(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(dpcox(&["--help"]).code, EXIT_OK);

    let ambiguous = dpcox(&["classify", "--degree", "4", "--type", "A3"]);
    assert_eq!(ambiguous.code, EXIT_USAGE);
    assert!(
        ambiguous.stderr.starts_with("error:"),
        "{}",
        ambiguous.stderr
    );
    assert_eq!(
        dpcox(&["classify", "--degree", "4", "--type", "A3:5"]).code,
        EXIT_OK
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["classify", "--degree", "4"][..],
        &["verify", "--all"],
        &["enumerate", "--degree", "3"],
    ] {
        let a = dpcox(args);
        let b = dpcox(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let mut j = args.to_vec();
        j.extend(["--format", "json"]);
        assert_eq!(dpcox(&j).stdout, dpcox(&j).stdout, "{args:?}");
    }
}

#[test]
fn json_and_table_agree() {
    let v = json(&["classify", "--degree", "5"]);
    let table = dpcox(&["classify", "--degree", "5"]).stdout;
    let types = v["types"].as_array().unwrap();
    assert_eq!(types.len(), 7);
    let lines: Vec<&str> = table.lines().filter(|l| l.starts_with("d5 ")).collect();
    assert_eq!(lines.len(), types.len());
    for (t, line) in types.iter().zip(&lines) {
        let verdict = t["classification"]["verdict"].as_str().unwrap();
        let lines_field = format!("lines={}", t["num_lines"]);
        assert!(
            line.contains(verdict) && line.contains(&lines_field),
            "{line}"
        );
    }

    let v = json(&["verify", "--all"]);
    let table = dpcox(&["verify", "--all"]).stdout;
    assert_eq!(v["cases"].as_array().unwrap().len(), 36);
    assert!(
        table.contains("36/36 cases passed, 16/16 toric entries passed"),
        "{table}"
    );
}

#[test]
fn classify_reports_relation_degree_in_case_coordinates() {
    let out = dpcox(&["classify", "--degree", "5", "--type", "A3"]);
    assert_eq!(out.code, EXIT_OK);
    assert!(
        out.stdout.contains("d5-A3:relation=2l0-l1-l2"),
        "{}",
        out.stdout
    );

    let v = json(&["classify", "--degree", "5", "--type", "A3"]);
    let c = &v["types"][0]["classification"];
    assert_eq!(c["catalog_case"], "d5-A3");
    assert_eq!(c["catalog_relation_degree"], "2l0-l1-l2");
    assert_eq!(c["assumption_dependent"], false);
}

#[test]
fn enumerate_lists_diagrams() {
    let v = json(&["enumerate", "--degree", "7"]);
    let types = v["types"].as_array().unwrap();
    assert_eq!(types.len(), 2);
    for t in types {
        let n = t["diagram"]["vertices"].as_array().unwrap().len();
        assert_eq!(
            n as u64,
            t["num_lines"].as_u64().unwrap() + t["ade"].as_str().map_or(0, |a| u64::from(a != "-"))
        );
    }
}

#[test]
fn verify_expands_parameterized_cases() {
    let v = json(&["verify", "--all"]);
    let base = v["cases"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["id"].as_str()?.strip_suffix("-l0").map(str::to_string))
        .next()
        .expect("a parameterized case");
    let both = json(&["verify", "--case", &base]);
    assert_eq!(both["cases"].as_array().unwrap().len(), 2);
    let one = json(&["verify", "--case", &base, "--lambda", "1"]);
    let ids: Vec<&str> = one["cases"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(ids, vec![format!("{base}-l1")]);
    assert_eq!(
        dpcox(&["verify", "--case", &base, "--lambda", "2"]).code,
        EXIT_USAGE
    );
}

#[test]
fn corrupted_catalog_fails_verification() {
    let path = temp_catalog("corrupt", &corrupted_catalog());
    let out = dpcox(&[
        "verify",
        "--case",
        "d6-A2",
        "--catalog",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, EXIT_FAILURE, "{}", out.stdout);
    let v = json(&[
        "verify",
        "--case",
        "d6-A2",
        "--catalog",
        path.to_str().unwrap(),
    ]);
    assert_eq!(v["ok"], false);

    let missing = dpcox(&["verify", "--all", "--catalog", "/nonexistent/catalog.json"]);
    assert_eq!(missing.code, EXIT_USAGE);
    let _ = std::fs::remove_dir_all(path.parent().unwrap());
}

#[test]
fn catalog_path_from_the_environment() {
    let path = temp_catalog("env", &corrupted_catalog());
    let bin = env!("CARGO_BIN_EXE_dpcox");
    let status = Command::new(bin)
        .args(["verify", "--case", "d6-A2"])
        .env("DPCOX_CATALOG", &path)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_FAILURE));
    let status = Command::new(bin)
        .args(["verify", "--case", "d6-A2"])
        .env_remove("DPCOX_CATALOG")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(EXIT_OK));
    let _ = std::fs::remove_dir_all(path.parent().unwrap());
}

#[test]
fn timings_are_opt_in() {
    assert!(json(&["enumerate", "--degree", "6"])
        .get("elapsed_ms")
        .is_none());
    assert!(json(&["enumerate", "--degree", "6", "--timings"])["elapsed_ms"].is_u64());
}
