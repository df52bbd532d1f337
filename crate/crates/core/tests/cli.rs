use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mvda(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvda")).args(args).env_remove("MVDA_SEED").output().unwrap()
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gamma_prints_log_pi() {
    let out = mvda(&["gamma", "-p", "2", "--alpha", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_out(&out)["log_value"].as_f64().unwrap();
    assert!((v - std::f64::consts::PI.ln()).abs() < 1e-13);
}

#[test]
fn usage_and_help_codes() {
    assert_eq!(mvda(&["nonsense"]).status.code(), Some(1));
    assert_eq!(mvda(&["gamma", "--alpha", "2"]).status.code(), Some(1));
    assert_eq!(mvda(&["--help"]).status.code(), Some(0));
    assert_eq!(mvda(&["gamma", "-p", "3", "--alpha", "1.5"]).status.code(), Some(2));
}

#[test]
fn small_commands() {
    let v = json_out(&mvda(&["pochhammer", "-a", "3", "--partition", "2,1"]))["value"].as_f64().unwrap();
    assert_eq!(v, 24.0);
    let v = json_out(&mvda(&["zonal", "--partition", "1,1", "--eigenvalues", "2,3"]))["value"].as_f64().unwrap();
    assert!((v - 6.0).abs() < 1e-12);
    let v = json_out(&mvda(&["power-mean", "--weights", "0.5,0.5", "--values", "2,4", "-b", "-1"]))["value"]
        .as_f64()
        .unwrap();
    assert!((v - 8.0 / 3.0).abs() < 1e-14);
    let r = json_out(&mvda(&["hyp1f1", "-a", "1", "-c", "3", "--eigenvalues", "0.5"]));
    let x: f64 = 0.5;
    assert!((r["value"].as_f64().unwrap() - 2.0 * (x.exp() - 1.0 - x) / (x * x)).abs() < 1e-10);
    assert_eq!(r["converged"], Value::Bool(true));
    assert_eq!(mvda(&["power-mean", "--weights", "0.5,0.6", "--values", "2,4", "-b", "1"]).status.code(), Some(1));
}

#[test]
fn matrix_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "a.json", r#"{"p":2,"re":[[2,0],[0,3]],"im":[[0,0],[0,0]]}"#);
    let v = json_out(&mvda(&["zonal", "--partition", "1", "--matrix", &m]))["value"].as_f64().unwrap();
    assert!((v - 5.0).abs() < 1e-12);
    let bad = write(dir.path(), "b.json", r#"{"p":2,"re":[[2,1],[0,3]]}"#);
    assert_eq!(mvda(&["zonal", "--partition", "1", "--matrix", &bad]).status.code(), Some(1));
}

#[test]
fn average_success_and_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let ok = write(
        dir.path(),
        "ok.json",
        r#"{"measure":{"kind":"rect_type2_p1","p":1,"k":1,"alphas":[0.5,3],"ns":[2]},"functional":"hermitian_form_moment","h":1}"#,
    );
    let out = mvda(&["average", "--spec", &ok]);
    assert_eq!(out.status.code(), Some(0));
    assert!((json_out(&out)["value"].as_f64().unwrap() - 1.25).abs() < 1e-12);

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"measure":{"kind":"type2","p":2,"k":2,"alphas":[2,3,2.5]},"functional":"det_power","gammas":[1,0.6]}"#,
    );
    let out = mvda(&["average", "--spec", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json_out(&out);
    assert_eq!(doc["conditions_ok"], Value::Bool(false));
    assert!(doc.get("value").is_none());
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha_3 - (gamma_1 + ... + gamma_k) > p-1"));
}

#[test]
fn sample_seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(dir.path(), "m.json", r#"{"kind":"type1","p":1,"k":1,"alphas":[2,3]}"#);
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_mvda"));
        cmd.args(["sample", "--spec", &spec, "--count", "3"]).env_remove("MVDA_SEED");
        if let Some(e) = env {
            cmd.env("MVDA_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    let default = run(None, None);
    let lines: Vec<&str> = default.lines().collect();
    assert_eq!(lines.len(), 4);
    let header: Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(header["seed"]["seed"], 42);
    assert_eq!(header["measure"]["kind"], "type1");
    let from_env = run(Some("7"), None);
    assert!(from_env.lines().next().unwrap().contains(r#""seed":7"#));
    assert_ne!(from_env, default);
    let flag_wins = run(Some("7"), Some("42"));
    assert_eq!(flag_wins, default);
}

#[test]
fn verify_reports_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let suite = write(
        dir.path(),
        "suite.json",
        r#"[{"case_id":"beta","measure":{"kind":"type1","p":1,"k":1,"alphas":[2,3]},"functional":"det_power","gammas":[1],"mc":{"samples":20000}}]"#,
    );
    let report = dir.path().join("r.csv");
    let out = mvda(&["verify", "--suite", &suite, "--format", "csv", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&report).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "case_id,estimate,std_error,closed_form,abs_diff,tolerance,verdict,n,runtime_ms");
    assert!(lines[1].contains(",pass,20000,"));

    let failing = write(
        dir.path(),
        "fail.json",
        r#"[{"case_id":"fine","measure":{"kind":"type1","p":1,"k":1,"alphas":[2,3]},"functional":"det_power","gammas":[1],"mc":{"samples":5000}},
            {"case_id":"missing","measure":{"kind":"type2","p":1,"k":1,"alphas":[2,0.5]},"functional":"det_power","gammas":[1]}]"#,
    );
    let out = mvda(&["verify", "--suite", &failing, "--no-timing"]);
    assert_eq!(out.status.code(), Some(3));
    let reports = json_out(&out);
    assert_eq!(reports[0]["verdict"], "pass");
    assert_eq!(reports[1]["verdict"], "fail");
    assert!(reports[1]["error"].as_str().unwrap().contains("alpha_2"));

    // a seed override changes estimates, repeating it does not
    let a = mvda(&["verify", "--suite", &suite, "--seed", "5", "--no-timing"]).stdout;
    let b = mvda(&["verify", "--suite", &suite, "--seed", "5", "--no-timing", "--workers", "3"]).stdout;
    let c = mvda(&["verify", "--suite", &suite, "--no-timing"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
}
