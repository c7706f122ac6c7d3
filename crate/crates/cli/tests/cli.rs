use std::process::{Command, Output};

use serde_json::Value;

const SU11: &str = r#"{"type":"A","rank":1,"aut":"id","painted":[1]}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flagpoisson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn leafdim_su11_equator() {
    let out = run(&["leafdim", "--vogan", SU11, "--u", "1", "--w", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"]["leaf_dim"], 0);
    assert_eq!(doc["header"]["vogan"]["painted"], serde_json::json!([1]));
}

#[test]
fn poincare_a2() {
    let out = run(&["poincare", "A", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 + 2t^2 + 2t^4 + t^6");
}

#[test]
fn sl2chart_passes() {
    let out = run(&["sl2chart", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"]["pass"], true);
}

#[test]
fn vogan_from_file() {
    let path = std::env::temp_dir().join(format!("flagpoisson-cli-{}.json", std::process::id()));
    std::fs::write(&path, SU11).unwrap();
    let out = run(&["leafdim", "--vogan", path.to_str().unwrap(), "--u", "e", "--w", "1"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"]["leaf_dim"], 2);
}

#[test]
fn contract_errors_exit_1() {
    // malformed JSON
    let out = run(&["leafdim", "--vogan", "{not json", "--u", "e", "--w", "e"]);
    assert_eq!(out.status.code(), Some(1));
    // u must be a twisted involution: s1 s2 is not one for d = id
    let a2 = r#"{"type":"A","rank":2,"aut":"id","painted":[]}"#;
    let out = run(&["leafdim", "--vogan", a2, "--u", "1,2", "--w", "e"]);
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "NotTwistedInvolution");
    // painted vertex must be fixed by d
    let out = run(&[
        "table",
        "--vogan",
        r#"{"type":"A","rank":2,"aut":"flip","painted":[1]}"#,
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn enumeration_bound_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_flagpoisson"))
        .args(["poincare", "B", "3"])
        .env("FLAGPOISSON_MAX_WEYL", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let diag: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(diag["error"], "GroupTooLarge");
}

#[test]
fn table_csv_has_header_and_is_deterministic() {
    let args = ["table", "--vogan", SU11, "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with("# tool: flagpoisson "));
    assert!(text.contains("# seed: 7\n"));
    assert!(text.contains("# vogan: "));
    assert!(text.contains("\n1,1,1,1,1,1,1,0,false,true\n"));
}

#[test]
fn tensor_reports_agreement() {
    let out = run(&["tensor", "--vogan", SU11, "--u", "1", "--w", "1", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["result"][0]["agree"], true);
    assert_eq!(doc["result"][0]["predicted_dim"], 0);
}

#[test]
fn weyl_listing() {
    let out = run(&["weyl", "A", "2", "--twisted", "--aut", "flip"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"]["count"], 4);
    let out = run(&["roots", "G", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["result"]["positive_roots"].as_array().unwrap().len(), 6);
}
