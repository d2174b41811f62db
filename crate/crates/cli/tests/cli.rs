use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scratch() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("contracta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_contracta"));
    cmd.args(args).current_dir(scratch()).env_remove("CONTRACTA_MAX_N").env_remove("CONTRACTA_CONFIG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn json(out: &Output) -> Value {
    assert!(
        out.stdout.starts_with(b"{"),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn words(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|m| {
            let img = m["img"].as_array().unwrap();
            let parts: Vec<String> = img.iter().map(|x| x.to_string()).collect();
            format!("[{}]", parts.join(","))
        })
        .collect()
}

#[test]
fn analyze_nonregular_map() {
    let out = run(&["analyze", "--n", "6", "--map", "[1,2,2,3,4,3]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["regular"], false);
    assert!(v["convex_transversal"].is_null());
    assert_eq!(v["max_refinement"]["partition"], "{1}|{2}|{3}|{4,6}|{5}");
    assert_eq!(v["kernel"], "{1}|{2,3}|{4,6}|{5}");
    assert_eq!(v["height"], 4);
    assert_eq!(v["idempotent"], false);
    assert_eq!(v["transversals"].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_idempotent() {
    let v = json(&run(&["analyze", "--n", "4", "--map", "[3,2,3,2]"]));
    assert_eq!(v["idempotent"], true);
    assert_eq!(v["regular"], true);
    assert_eq!(v["image"], serde_json::json!([2, 3]));
    assert_eq!(v["fix_points"], serde_json::json!([2, 3]));
}

#[test]
fn abundance_at_four() {
    let out = run(&["verify", "--check", "abundance", "--family", "ct", "--n", "4"]);
    // the right-hand failure is the predicted one
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports[0]["check"], "abundance/left");
    assert_eq!(reports[0]["verdict"], "pass");
    assert_eq!(reports[1]["check"], "abundance/right");
    assert_eq!(reports[1]["verdict"], "fail");
    assert_eq!(reports[1]["expected"], "fail");
    let mut w = words(&reports[1]["counterexample"]["elements"]);
    w.sort();
    assert_eq!(w, ["[1,2,2,3]", "[2,3,3,4]", "[3,2,2,1]", "[4,3,3,2]"]);
}

#[test]
fn green_l_small() {
    let out = run(&["verify", "--check", "green-l", "--family", "ct", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["reports"][0]["verdict"], "pass");
}

#[test]
fn several_checks_in_one_call() {
    let out = run(&["verify", "--check", "green-r,green-d,regularity-ct", "--family", "ct", "--n", "4", "--output", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("check,family,n,p,verdict"));
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.contains(",pass,pass,true,")));
}

#[test]
fn unexpected_failure_exits_nonzero() {
    let out = run(&["verify", "--check", "idempotent-products", "--family", "ct", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn counterexample_replays_through_analyze() {
    let out = run(&["counterexample", "--check", "idempotent-products", "--family", "ct", "--n", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["found"], true);
    assert_eq!(v["witness"]["n"], 6);
    let elements = words(&v["witness"]["counterexample"]["elements"]);
    let product = &elements[1];
    let replay = json(&run(&["analyze", "--n", "6", "--map", product]));
    assert_eq!(replay["regular"], false);

    let none = json(&run(&["counterexample", "--check", "green-l", "--family", "ct", "--n", "4"]));
    assert_eq!(none["found"], false);
    assert!(none["witness"].is_null());
}

#[test]
fn rees_report() {
    let out = run(&["rees", "--family", "orct", "--n", "4", "--p", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 9);
    assert_eq!(v["carrier"][0], serde_json::json!([]));
    assert_eq!(v["report"]["inverse"], true);
    assert_eq!(v["report"]["consistent"], true);
    assert_eq!(run(&["rees", "--family", "orct", "--n", "4", "--p", "1"]).status.code(), Some(2));
    assert_eq!(run(&["rees", "--family", "ct", "--n", "4", "--p", "2"]).status.code(), Some(2));
}

#[test]
fn relation_methods_agree() {
    let oracle = json(&run(&["relations", "--family", "ct", "--n", "4", "--relation", "l", "--method", "oracle"]));
    let char = json(&run(&["relations", "--family", "ct", "--n", "4", "--relation", "l", "--method", "char"]));
    assert_eq!(oracle["classes"], char["classes"]);
    assert_eq!(oracle["count"], 12);
    assert_eq!(char["method"], "char");
}

#[test]
fn enumerate_counts() {
    let v = json(&run(&["enumerate", "--family", "oct", "--n", "2"]));
    assert_eq!(v["order"], 3);
    assert_eq!(v["idempotents"], 3);
    assert_eq!(v["regular"], 3);
    let csv = run(&["enumerate", "--family", "ct", "--n", "3", "--output", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap().lines().count(), 18);
}

#[test]
fn output_is_deterministic() {
    let args = ["verify", "--check", "structure,starred", "--family", "ct", "--n", "4"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!String::from_utf8_lossy(&a.stdout).contains("elapsed_ms"));
    let timed = run(&["verify", "--check", "green-r", "--family", "ct", "--n", "3", "--timing"]);
    assert!(json(&timed)["reports"][0]["elapsed_ms"].is_u64());
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        &["analyze", "--n", "3", "--map", "[1,4,2]"][..],
        &["analyze", "--n", "4", "--map", "[1,2,3]"],
        &["analyze", "--n", "3", "--map", "1,2"],
        &["verify", "--check", "nope", "--n", "3"],
        &["verify", "--check", "green-l", "--family", "oct", "--n", "3"],
        &["relations", "--family", "ct", "--n", "3", "--relation", "x"],
        &["relations", "--family", "ct", "--n", "3", "--relation", "j", "--method", "char"],
        &["enumerate", "--family", "ct", "--n", "0"],
        &["enumerate", "--family", "ct", "--n", "9"],
        &["enumerate", "--family", "pt", "--n", "3"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn env_cap_only_lowers() {
    let out = run_env(&["enumerate", "--family", "ct", "--n", "4"], &[("CONTRACTA_MAX_N", "3")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard exceeded"));
    let out = run_env(&["enumerate", "--family", "ct", "--n", "9"], &[("CONTRACTA_MAX_N", "50")]);
    assert_eq!(out.status.code(), Some(2));
    let out = run_env(&["enumerate", "--family", "ct", "--n", "3"], &[("CONTRACTA_MAX_N", "3")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn config_file_guards() {
    let path = scratch().join("low.toml");
    std::fs::write(&path, "[guards]\ncontraction = 3\n").unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(run(&["--config", p, "enumerate", "--family", "ct", "--n", "4"]).status.code(), Some(2));
    assert_eq!(run(&["--config", p, "enumerate", "--family", "ct", "--n", "3"]).status.code(), Some(0));
    let bad = scratch().join("bad.toml");
    std::fs::write(&bad, "[guards]\nunknown = 3\n").unwrap();
    assert_eq!(run(&["--config", bad.to_str().unwrap(), "enumerate", "--family", "ct", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn threads_flag() {
    let out = run(&["--threads", "2", "verify", "--check", "green-l", "--family", "ct", "--n", "4"]);
    assert_eq!(out.status.code(), Some(0));
}
