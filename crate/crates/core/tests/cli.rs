use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn soc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_soc"))
        .args(args)
        .env_remove("SOC_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

/// Real parts of a serialized spectrum set.
fn reals(set: &Value) -> Vec<f64> {
    set["values"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect()
}

#[test]
fn exit_codes() {
    let cases: &[(&[&str], i32)] = &[
        (&["spectrum", "--fixture", "block"], 0),
        (&["decompose", "--fixture", "nogo_b"], 0),
        (&["analytic", "--fixture", "triangle"], 0),
        (&["naive", "--fixture", "trivial"], 0),
        (&["nogo-demo"], 0),
        (&["network", "--fixture", "two_cycle", "--analytic"], 0),
        (&["basechange", "--fixture", "block"], 0),
        (&["validate", "--fixture", "block"], 0),
        (&["validate", "--fixture", "broken_operad"], 1),
        (&["spectrum"], 2),
        (&["spectrum", "--input", "/nonexistent/file.json"], 2),
        (&["basechange", "--fixture", "block", "--functor", "nope"], 2),
        (&["analytic", "--fixture", "block", "--max-loop-length", "1"], 2),
        (&["spectrum", "--fixture", "block", "--tolerance", "-1"], 2),
        (&["frobnicate"], 2),
    ];
    for (args, want) in cases {
        let out = soc(args);
        assert_eq!(code(&out), *want, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn json_is_deterministic_and_versioned() {
    for cmd in ["spectrum", "decompose", "analytic", "naive", "basechange", "validate"] {
        let args = [cmd, "--fixture", "block", "--format", "json"];
        let (a, b) = (soc(&args), soc(&args));
        assert_eq!(code(&a), 0, "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd} output differs between runs");
        let v = json(&a);
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["command"], cmd);
        assert_eq!(v["input"], "fixture:block");
    }
}

#[test]
fn two_cycle_interaction() {
    let out = soc(&["network", "--input", &fixture("two_cycle.json"), "--analytic", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(reals(&v["analytic"]["interaction"]), vec![6.0]);
    for s in v["analytic"]["per_color"].as_object().unwrap().values() {
        assert!(reals(s).is_empty());
    }
    let text = soc(&["network", "--fixture", "two_cycle", "--analytic"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("interaction {6}"));
}

#[test]
fn nogo_demo_separates() {
    let v = json(&soc(&["nogo-demo", "--format", "json"]));
    assert_eq!(v["naive_equal"], true);
    assert_eq!(v["separated"], true);
    assert_eq!(v["operadic_totals"]["A"], 4);
    assert_eq!(v["operadic_totals"]["B"], 6);
}

#[test]
fn broken_operad_reports_violations() {
    let out = soc(&["validate", "--fixture", "broken_operad", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let axioms: Vec<&str> = v["report"]["violations"].as_array().unwrap().iter().map(|x| x["axiom"].as_str().unwrap()).collect();
    assert!(axioms.contains(&"left_unit") && axioms.contains(&"associativity"), "{axioms:?}");
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let to_file = soc(&["decompose", "--fixture", "nogo_a", "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&to_file), 0);
    assert!(to_file.stdout.is_empty());
    let direct = soc(&["decompose", "--fixture", "nogo_a", "--format", "json"]);
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
}

#[test]
fn tolerance_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_soc"));
        cmd.args(["naive", "--fixture", "trivial", "--format", "json"]).args(extra);
        match env {
            Some(t) => cmd.env("SOC_TOLERANCE", t),
            None => cmd.env_remove("SOC_TOLERANCE"),
        };
        cmd.output().unwrap()
    };
    let tol = |out: &Output| json(out)["per_color"]["*"]["tolerance"].as_f64().unwrap();
    assert_eq!(tol(&run(Some("0.001"), &[])), 0.001);
    // the flag wins over the environment
    assert_eq!(tol(&run(Some("0.001"), &["--tolerance", "0.25"])), 0.25);
    assert_eq!(code(&run(Some("nonsense"), &[])), 2);
}

#[test]
fn parse_errors_carry_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\n  \"components\": {\"x\": 2},\n  \"structure\": [1, \n").unwrap();
    let out = soc(&["spectrum", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("{}:", path.display())), "{err}");
    assert!(err.contains(&format!("{}:4:0: EOF", path.display())), "{err}");
}

#[test]
fn basechange_runs_requested_functors() {
    let v = json(&soc(&["basechange", "--fixture", "trivial", "--functor", "conjugate", "--format", "json"]));
    let checks = v["reports"].as_array().unwrap();
    assert_eq!(v["pass"], true);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(checks.iter().any(|c| c["check"] == "spectral_mapping"));
}
