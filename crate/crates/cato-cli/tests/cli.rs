//! End-to-end tests of the binary: exit codes, report shapes, determinism.

use std::process::{Command, Output};

fn cato(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cato"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn roots_reports_the_system_summary() {
    let out = cato(&["roots", "G2"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["t"], 6);
    assert_eq!(v["string_law"], "ok");
    assert_eq!(v["jacobi"], "ok");
    assert_eq!(v["highest_root"], "[3,2]");

    let a1 = json_of(&cato(&["roots", "A1"]));
    assert_eq!(a1["t"], 1);
    assert_eq!(a1["dim"], 3);
}

#[test]
fn bad_type_tag_is_a_usage_error() {
    let out = cato(&["roots", "Z9"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty());
}

#[test]
fn abcd_counterexample_modes() {
    let clean = cato(&["check", "abcd", "--type", "B3", "--nmax", "4"]);
    assert_eq!(code(&clean), 0);
    let v = json_of(&clean);
    assert_eq!(v["status"], "pass");
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["holds"] == true));

    // for G2 the suite passes exactly when the counterexample appears
    let g2 = cato(&["check", "abcd", "--type", "G2", "--nmax", "3"]);
    assert_eq!(code(&g2), 0);
    let v = json_of(&g2);
    assert_eq!(v["expected_counterexample"], true);
    let cex = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["gamma"] == "[2,1]")
        .unwrap();
    assert_eq!(cex["counterexample"]["n"], 3);
    assert_eq!(cex["counterexample"]["weight_sum"], 2);

    // too small a search space to exhibit it: mathematical failure
    let short = cato(&["check", "abcd", "--type", "G2", "--nmax", "2"]);
    assert_eq!(code(&short), 1);
}

#[test]
fn integrality_verdict_holds_on_the_reference_instance() {
    let out = cato(&[
        "check", "integrality", "--type", "A2", "--lambda", "0,1/2", "--gamma", "1,1", "--n",
        "1", "--p", "5",
    ]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["report"]["verdict"], "holds");
    assert_eq!(v["status"], "pass");

    let bad_p = cato(&[
        "check", "integrality", "--type", "A2", "--lambda", "0,1/2", "--gamma", "1,1", "--n",
        "1", "--p", "4",
    ]);
    assert_eq!(code(&bad_p), 2);
}

#[test]
fn verma_queries() {
    let hom = json_of(&cato(&[
        "verma", "hom", "--type", "A1", "--mu", "-2", "--lambda", "0", "--depth", "6",
    ]));
    assert_eq!(hom["hom_dim"], 1);

    let up = json_of(&cato(&["verma", "up", "--type", "A1", "--mu", "0", "--lambda", "0"]));
    assert_eq!(up["up"], true);

    let dims = cato(&[
        "verma", "dims", "--type", "A2", "--lambda", "0,1/2", "--depth", "4", "--simple",
        "--format", "csv",
    ]);
    assert_eq!(code(&dims), 0);
    let text = String::from_utf8(dims.stdout).unwrap();
    assert!(text.starts_with("offset,dim\n"));
    assert!(text.contains("\"[1,0]\",0"));

    // beyond the truncation: a per-query error entry, not a hard failure
    let deep = cato(&[
        "verma", "singvec", "--type", "A1", "--mu", "-20", "--lambda", "0", "--depth", "6",
    ]);
    assert_eq!(code(&deep), 0);
    assert!(json_of(&deep)["error"].is_string());
}

#[test]
fn nil_queries() {
    let bch = json_of(&cato(&["nil", "bch", "--type", "A2", "--x", "1,0=1", "--y", "0,1=1"]));
    let theta = bch["log"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["gen"] == "y[1,1]")
        .expect("bracket term present");
    assert!(theta["coeff"] == "1/2" || theta["coeff"] == "-1/2");

    let ledger = cato(&[
        "nil", "ledger", "--type", "A1", "--lambda", "0", "--depth", "6", "--log-u", "1=1",
        "--beta", "1", "--p", "2", "--format", "csv",
    ]);
    let text = String::from_utf8(ledger.stdout).unwrap();
    assert!(text.contains("4,-3\n"));

    let reduce = json_of(&cato(&[
        "nil", "reduce", "--type", "B2", "--log-u", "0,1=1/5;1,1=5", "--p", "5",
    ]));
    assert_eq!(reduce["terminal"], "cleared");
    assert_eq!(reduce["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn csv_is_refused_where_no_table_exists() {
    let out = cato(&[
        "verma", "up", "--type", "A1", "--mu", "0", "--lambda", "0", "--format", "csv",
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn depth_cap_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_cato"))
        .args(["verma", "dims", "--type", "A1", "--lambda", "0", "--depth", "9"])
        .env("CATO_DEPTH_CAP", "4")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn reports_are_deterministic() {
    let a = cato(&["roots", "B2"]);
    let b = cato(&["roots", "B2"]);
    assert_eq!(a.stdout, b.stdout);
    let c = cato(&["check", "bch", "--type", "B2", "--trials", "3", "--seed", "9"]);
    let d = cato(&["check", "bch", "--type", "B2", "--trials", "3", "--seed", "9"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn output_flag_writes_the_report_file() {
    let dir = std::env::temp_dir().join("cato-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("roots-a2.json");
    let out = cato(&["roots", "A2", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["t"], 3);
    std::fs::remove_file(&path).unwrap();
}
