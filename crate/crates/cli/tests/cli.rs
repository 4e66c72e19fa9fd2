use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_d4sigma")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

#[test]
fn list_prints_every_scenario() {
    let o = run(&["list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let ids: Vec<&str> = text.lines().map(|l| l.split('\t').next().unwrap()).collect();
    assert_eq!(ids, ["S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "S10"]);
}

#[test]
fn verify_all_passes() {
    let o = run(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("10 scenarios: 10 passed, 0 failed, 0 errors\n"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["verify", "S0"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["verify"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "yaml", "list"]).status.code(), Some(2));
    assert_eq!(run(&["dump-roots", "--format", "text"]).status.code(), Some(2));
}

#[test]
fn json_round_trips() {
    let o = run(&["--format", "json", "verify", "S1", "S8"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    let again: serde_json::Value = serde_json::from_str(&serde_json::to_string(&value).unwrap()).unwrap();
    assert_eq!(again, value);
    let arr = value.as_array().unwrap();
    assert_eq!(arr.len(), 2);
    for key in ["scenario", "claim", "status", "paper_refs", "details", "notes"] {
        assert!(arr[0].get(key).is_some(), "missing {key}");
    }
    assert_eq!(arr[0]["details"]["permutation"], "(4 5 8 11 10 7)(6 9)(12)");
    assert!(!arr[1]["notes"].as_array().unwrap().is_empty());
}

#[test]
fn output_is_deterministic() {
    let a = run(&["--format", "json", "verify", "--all"]);
    let b = run(&["--format", "json", "verify", "--all"]);
    assert_eq!(a.stdout, b.stdout);
    let t1 = run(&["verify", "--all"]);
    let t2 = run(&["verify", "--all"]);
    assert_eq!(t1.stdout, t2.stdout);
}

#[test]
fn reports_follow_registry_order() {
    let text = stdout(&run(&["verify", "S10", "S2", "S1"]));
    let heads: Vec<&str> = text.lines().filter(|l| l.starts_with('[')).map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(heads, ["S1", "S2", "S10"]);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = run(&["--out", path.to_str().unwrap(), "verify", "S2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("[PASS] S2"));
}

#[test]
fn dump_roots_formats() {
    let tsv = stdout(&run(&["dump-roots", "--format", "tsv"]));
    let lines: Vec<&str> = tsv.lines().collect();
    assert_eq!(lines.len(), 25);
    assert!(lines.contains(&"12\t1\t2\t1\t1\t5\t2"));
    assert!(lines.contains(&"6\t0\t1\t1\t0\t2\t1"));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["dump-roots", "--format", "json"]))).unwrap();
    let rows = json.as_array().unwrap();
    assert_eq!(rows.len(), 24);
    assert_eq!(rows[0]["label"], -12);
    assert_eq!(rows[0]["pairing"], -2);
}
