use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn entbundle(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entbundle")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn out_dir(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn classify_worked_example() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "w");
    let run = entbundle(&["classify", "--instance", "builtin:worked", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let doc = read_json(&Path::new(&out).join("bundles.json"));
    let bundles = doc["bundles"].as_array().unwrap();
    let sizes: Vec<u64> = bundles.iter().map(|b| b["members"].as_array().unwrap().len() as u64 * 2).collect();
    assert_eq!(sizes, vec![2, 4, 2]);
    assert_eq!(doc["engines"], serde_json::json!(["oracle"]));
}

#[test]
fn classify_k5_histogram_and_engines() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "k5");
    let run = entbundle(&["classify", "--instance", "builtin:k5", "--out", &out]);
    assert_eq!(code(&run), 0);
    let doc = read_json(&Path::new(&out).join("bundles.json"));
    assert_eq!(doc["agreement"], Value::Bool(true));
    assert_eq!(doc["total_bipartitions"], 511);
    assert_eq!(doc["histogram"], serde_json::json!({"1": 25, "4": 20, "38": 5, "216": 1}));
    let csv = fs::read_to_string(Path::new(&out).join("histogram.csv")).unwrap();
    assert_eq!(csv.lines().count(), 52);
}

#[test]
fn classify_minor_chain_subsets() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "m");
    let run = entbundle(&["classify", "--instance", "builtin:minor-321", "--out", &out]);
    assert_eq!(code(&run), 0);
    let doc = read_json(&Path::new(&out).join("bundles.json"));
    assert_eq!(doc["agreement"], Value::Bool(true));
    // Any nonempty proper part of the chain {1,2,3} cuts the same way.
    let bundle = doc["bundles"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| b["members"].as_array().unwrap().iter().any(|m| m[0] == serde_json::json!([1])))
        .unwrap();
    let sides: Vec<&Value> = bundle["members"].as_array().unwrap().iter().map(|m| &m[0]).collect();
    assert!(sides.contains(&&serde_json::json!([1, 2])));
}

#[test]
fn simulate_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (out_dir(&dir, "a"), out_dir(&dir, "b"));
    for out in [&a, &b] {
        let run = entbundle(&[
            "simulate",
            "--instance",
            "builtin:k5",
            "--tf",
            "2",
            "--dt",
            "0.01",
            "--samples",
            "3",
            "--sizes",
            "1,2",
            "--out",
            out,
        ]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    }
    for file in ["trace.csv", "leakage.csv", "spectrum.csv", "run.json"] {
        let x = fs::read(Path::new(&a).join(file)).unwrap();
        assert_eq!(x, fs::read(Path::new(&b).join(file)).unwrap(), "{file} differs");
    }
    let trace = fs::read_to_string(Path::new(&a).join("trace.csv")).unwrap();
    // 10 size-1 and 45 size-2 bipartitions at 3 sample times.
    assert_eq!(trace.lines().count(), 1 + 3 * 55);
    assert_eq!(trace.lines().next().unwrap(), "time,bipartition_id,size_A,entropy,leakage");
    let config = read_json(&Path::new(&a).join("run.json"));
    assert_eq!(config["constraint_sign"], "favored");
}

#[test]
fn constraint_sign_can_be_flipped() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "f");
    let run = entbundle(&[
        "simulate",
        "--instance",
        "builtin:k5",
        "--tf",
        "1",
        "--dt",
        "0.01",
        "--samples",
        "2",
        "--flip-constraint-sign",
        "--all-spectra",
        "--out",
        &out,
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(read_json(&Path::new(&out).join("run.json"))["constraint_sign"], "flipped");
    let spectra = fs::read_to_string(Path::new(&out).join("spectrum.csv")).unwrap();
    assert!(spectra.lines().any(|l| l.starts_with("0.000000000000000e0,")));
}

#[test]
fn report_writes_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "r");
    let run = entbundle(&["report", "--instance", "builtin:k5", "--tf", "5", "--dt", "0.01", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let doc = read_json(&Path::new(&out).join("report.json"));
    assert_eq!(doc["config"]["projected"], Value::Bool(true));
    assert_eq!(doc["comparison"]["bundles"], 51);
    // Projected states are bundle-consistent, so no bundle is split.
    assert_eq!(doc["comparison"]["split_bundles"], serde_json::json!([]));
}

#[test]
fn verify_suite_and_negative_control() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "v");
    let run = entbundle(&["verify", "--states", "5", "--seed", "3", "--out", &out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stdout));
    let doc = read_json(&Path::new(&out).join("verify.json"));
    assert_eq!(doc["passed"], Value::Bool(true));

    let run = entbundle(&["verify", "--states", "2", "--mutate", "--out", &out]);
    assert_eq!(code(&run), 3);
    let doc = read_json(&Path::new(&out).join("verify.json"));
    let failed: Vec<&Value> = doc["properties"].as_array().unwrap().iter().filter(|p| p["passed"] == false).collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["property"], "cardinality-law");
    assert!(failed[0]["counterexample"].is_object());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = out_dir(&dir, "e");
    assert_eq!(code(&entbundle(&["classify", "--instance", "/nonexistent.json", "--out", &out])), 2);
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"n\": 3, \"states\": [\"01\"]}").unwrap();
    assert_eq!(code(&entbundle(&["classify", "--instance", bad.to_str().unwrap(), "--out", &out])), 2);
    assert_eq!(code(&entbundle(&["simulate", "--instance", "builtin:worked", "--out", &out])), 2);
    assert_eq!(code(&entbundle(&["simulate", "--instance", "builtin:k5", "--tf", "-1", "--out", &out])), 2);
    assert_eq!(code(&entbundle(&["report", "--instance", "builtin:k5", "--radius", "0", "--out", &out])), 2);
    let threads = Command::new(env!("CARGO_BIN_EXE_entbundle"))
        .args(["classify", "--instance", "builtin:worked", "--out", &out])
        .env("ENTBUNDLE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&threads), 2);
}

#[test]
fn resource_guard_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.json");
    let n = 24;
    fs::write(&big, format!("{{\"n\": {n}, \"states\": [\"{}\", \"{}\"]}}", "0".repeat(n), "1".repeat(n))).unwrap();
    let run = entbundle(&["classify", "--instance", big.to_str().unwrap(), "--out", &out_dir(&dir, "g")]);
    assert_eq!(code(&run), 4, "{}", String::from_utf8_lossy(&run.stderr));
}
