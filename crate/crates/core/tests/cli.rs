use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_gromov-walk");

const SIMPLE: &str = r#"{"support": [{"word": "a", "p": 0.25}, {"word": "A", "p": 0.25},
                                     {"word": "b", "p": 0.25}, {"word": "B", "p": 0.25}]}"#;

fn gromov(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn gromov_env(args: &[&str], workers: &str) -> Output {
    Command::new(BIN)
        .args(args)
        .env("GROMOV_WALK_WORKERS", workers)
        .output()
        .expect("binary runs")
}

fn config(estimator: &str, params: &str, step: &str) -> String {
    format!(
        r#"{{"schema_version": 1, "model": {{"kind": "free", "rank": 2}}, "step": {step},
            "estimator": "{estimator}", "params": {params}, "seed": 9, "trials": 400}}"#
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn horo_eval_prints_json() {
    let out = gromov(&["horo", "eval", "--model", "line", "--horo", "busemann:+inf", "--at", "3", "--at", "-2"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["type"], "horo_eval");
    let text = v["results"].to_string();
    assert!(text.contains("-3") && text.contains('2'), "{text}");
}

#[test]
fn run_is_byte_identical_and_worker_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "drift.json", &config("drift", r#"{"n": 300}"#, SIMPLE));
    let mut csvs = Vec::new();
    for (i, workers) in ["1", "3", "3"].iter().enumerate() {
        let out_path = dir.path().join(format!("run{i}.csv"));
        let out = gromov_env(&["run", &cfg, "--out", out_path.to_str().unwrap()], workers);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        csvs.push(std::fs::read(&out_path).unwrap());
        let record: serde_json::Value =
            serde_json::from_slice(&std::fs::read(out_path.with_extension("json")).unwrap()).unwrap();
        assert_eq!(record["estimator"], "drift");
        assert_eq!(record["config_digest"].as_str().unwrap().len(), 64);
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(csvs[1], csvs[2]);
    assert!(String::from_utf8_lossy(&csvs[0]).starts_with("n,trials,l_hat,stderr,oracle\n"));
}

#[test]
fn walk_is_reproducible() {
    let a = gromov(&["--seed", "5", "walk", "--n", "50", "--trial", "2"]);
    let b = gromov(&["--seed", "5", "walk", "--n", "50", "--trial", "2"]);
    let c = gromov(&["--seed", "6", "walk", "--n", "50", "--trial", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(String::from_utf8_lossy(&a.stdout).lines().count(), 52);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_mass = SIMPLE.replace("\"B\", \"p\": 0.25", "\"B\", \"p\": 0.15");
    let cfg = write(dir.path(), "bad.json", &config("drift", r#"{"n": 10}"#, &bad_mass));
    let out = gromov(&["run", &cfg]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));

    let cfg = write(dir.path(), "unknown.json", &config("drift", r#"{"n": 10, "m": 3}"#, SIMPLE));
    assert_eq!(gromov(&["run", &cfg]).status.code(), Some(2));

    let cfg = write(dir.path(), "ok.json", &config("drift", r#"{"n": 10}"#, SIMPLE));
    assert_eq!(gromov(&["estimate", "tail", "--config", &cfg]).status.code(), Some(2));
    assert_eq!(gromov(&["run", "/nonexistent/config.json"]).status.code(), Some(2));
    assert_eq!(gromov(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let ok = gromov(&["verify", "quick"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = gromov(&["verify", "quick", "--inject-fault", "flip-shadow"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = String::from_utf8_lossy(&bad.stdout);
    assert!(text.contains("FAIL"), "{text}");
}

#[test]
fn strips_enumerate_routes_agree() {
    let args = ["strips", "enumerate", "--alpha", "(A)", "--beta", "(a)", "--v", "aaaa", "--max-radius", "6"];
    let fast = gromov(&args);
    let mut naive_args = args.to_vec();
    naive_args.push("--naive");
    let naive = gromov(&naive_args);
    assert_eq!(fast.status.code(), Some(0));
    assert_eq!(fast.stdout, naive.stdout);
}
