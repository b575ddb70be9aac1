use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_phasedef"));
    c.env_remove("PHASEDEF_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn json_out(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json")
}

fn schema(name: &str) -> jsonschema::JSONSchema {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::JSONSchema::compile(&v).expect("valid schema")
}

fn assert_valid(name: &str, v: &Value) {
    let s = schema(name);
    let msgs: Vec<String> = match s.validate(v) {
        Ok(()) => return,
        Err(errs) => errs.map(|e| format!("{e} at {}", e.instance_path)).collect(),
    };
    panic!("{name}: {msgs:?}");
}

#[test]
fn classify_compact_form() {
    let v = json_out(&["classify", "--n", "3", "--eps", "1,1,0"]);
    assert_eq!(v["real_stratum"], "R++");
    assert_eq!(v["paper_label"], "o(5)");
    assert_eq!(v["conflict"], false);
    assert_eq!(v["eps"][0], "1/1");
    assert_valid("classify", &v);
    let t = json_out(&["classify", "--n", "3", "--eps", "1,1,3/5", "--table"]);
    assert_eq!(t["normal_form"]["lambda"], "10/9");
    assert_valid("classify", &t);
    let c = json_out(&["classify", "--n", "3", "--eps", "0,1,5", "--complex"]);
    assert_eq!(c["conflict"], true);
    assert_valid("classify_complex", &c);
}

#[test]
fn cohomology_of_g3() {
    let v = json_out(&["cohomology", "--algebra", "g", "--n", "3", "--degree", "2"]);
    assert_eq!(v["dimension"], 3);
    assert_valid("cohomology", &v);
    let e = json_out(&["cohomology", "--algebra", "e", "--n", "3", "--invariant"]);
    assert_eq!(e["dimension"], 1);
}

#[test]
fn casimir_report_warns_on_printed_convention() {
    let v = json_out(&["casimir", "--n", "3", "--eps", "2,3,0"]);
    assert_eq!(v["dimension"], 1);
    assert_eq!(v["casimirs"][0]["grouped"], "I^2 + 3*x^2 + 2*p^2 + 6*l^2");
    assert_eq!(v["comparison"]["status"], "WARN");
    assert_valid("casimir", &v);
}

#[test]
fn orbit_chart_point() {
    let v = json_out(&["orbit", "--n", "3", "--eps", "0,1,0", "--q", "1,0,0", "--p", "0,1,0"]);
    assert_eq!(v["poisson_rank"], 6);
    assert!((v["free_hamiltonian"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert_valid("orbit", &v);
    let w = json_out(&["orbit", "--n", "3", "--eps", "0,0,0", "--point", "0,0,0,0,0,0,0,0,0,1"]);
    assert_eq!(w["poisson_rank"], 6);
    assert_valid("orbit", &w);
}

#[test]
fn simulate_csv_and_manifest() {
    let args = ["simulate", "--n", "3", "--eps", "0,1,0", "--q", "0,0,0", "--p", "1,0,0", "--T", "10", "--dt", "0.001", "--stride", "100"];
    let out = run(&args);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(csv.starts_with("t,I,x_1,x_2,x_3,p_1,p_2,p_3,l_12,l_13,l_23,H0,K,max_angular_residual\n"));
    assert_eq!(csv.lines().count(), 102);
    let summary: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(summary["drift"]["hamiltonian"].as_f64().unwrap() <= 1e-8);
    let again = run(&args);
    assert_eq!(out.stdout, again.stdout, "output must be byte-identical");

    let mut json_args = args.to_vec();
    json_args.extend(["--format", "json"]);
    let m = json_out(&json_args);
    assert_valid("run_manifest", &m);
}

#[test]
fn out_dir_from_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("PHASEDEF_OUT_DIR", dir.path())
        .args(["simulate", "--n", "3", "--eps", "0,-1,0", "--q", "0.1,0,0", "--p", "0,0.5,0", "--T", "1", "--dt", "0.01"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("trajectory.csv").exists());
    let m: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("run_manifest.json")).unwrap()).unwrap();
    assert_valid("run_manifest", &m);

    let other = tempfile::tempdir().unwrap();
    let out = bin()
        .env("PHASEDEF_OUT_DIR", dir.path())
        .args(["--out-dir", other.path().to_str().unwrap(), "classify", "--n", "3", "--eps", "1,1,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(other.path().join("classify.json").exists());
}

#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "n = 4\neps = 1,-1,0\n").unwrap();
    let v = json_out(&["--config", cfg.to_str().unwrap(), "classify"]);
    assert_eq!(v["n"], 4);
    assert_eq!(v["real_stratum"], "R+-");
    let w = json_out(&["--config", cfg.to_str().unwrap(), "classify", "--n", "3"]);
    assert_eq!(w["n"], 3);
    assert_eq!(w["paper_label"], "o(4,1)");
}

#[test]
fn grassmann_examples() {
    let v = json_out(&["grassmann", "--u", "1,0,0,1,0", "--v", "0,1,0,0,1"]);
    assert_valid("grassmann", &v);
    let coords: Vec<f64> = v["bivector"]["coords"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(coords, vec![1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 1.0]);
    let b = json_out(&["grassmann", "--bivector", "1,0,0,0,-1,0,1,0,0,1"]);
    assert_valid("grassmann", &b);
    assert!(b["roundtrip_error"].as_f64().unwrap() <= 1e-12);
    let out = run(&["grassmann", "--u", "1,0,0,0,0", "--v", "0,1,0,0,0", "--normalize", "chart"]);
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(e["error"]["code"], "outside_chart");
}

#[test]
fn errors_are_machine_readable() {
    for (args, code) in [
        (vec!["classify", "--n", "3", "--eps", "1,x,0"], "parse"),
        (vec!["orbit", "--n", "3", "--eps", "0,-1,0", "--q", "2,0,0", "--p", "0,0,0"], "chart_domain"),
        (vec!["frobnicate"], "usage"),
        (vec!["classify", "--n", "3", "--eps", "0,0,0"], "parameter"),
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let e: Value = serde_json::from_slice(&out.stderr).unwrap();
        assert_eq!(e["error"]["code"], code, "{args:?}");
        assert_valid("error", &e);
    }
}

#[test]
fn verify_suite_passes_with_warnings() {
    let out = run(&["verify", "--suite", "all"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("WARN"));
    assert!(!text.contains("FAIL "));
    let v = json_out(&["verify", "--suite", "discrepancies", "--format", "json"]);
    assert_valid("verify", &v);
}

#[test]
fn verify_fails_with_impossible_tolerance() {
    let out = run(&["--tol-drift", "1e-30", "--tol-residual", "1e-30", "verify", "--suite", "acceptance"]);
    assert_eq!(out.status.code(), Some(1));
}
