use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obscheck"))
        .args(args)
        .output()
        .expect("spawn obscheck")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn net_file() -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/data/present_4_5.net");
    p.to_str().unwrap().to_string()
}

const PRESENT_45: [&str; 8] = [
    "--pattern",
    "present",
    "--lo",
    "4",
    "--hi",
    "5",
    "--hi-open",
    "--json",
];

fn verdict<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["name"] == name)
        .unwrap_or_else(|| panic!("no verdict {name}"))
}

#[test]
fn gen_writes_aut_and_reports_size() {
    let dir = tempfile::tempdir().unwrap();
    let aut = dir.path().join("g.aut");
    let dot = dir.path().join("g.dot");
    let o = run(&[
        "gen",
        "--model",
        "builtin:present:4:5",
        "--out",
        aut.to_str().unwrap(),
        "--dot",
        dot.to_str().unwrap(),
        "--json",
    ]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["states"], 28);
    let text = std::fs::read_to_string(&aut).unwrap();
    assert!(text.starts_with("des (0, 81, 28)"), "{text}");
    assert!(std::fs::read_to_string(&dot)
        .unwrap()
        .starts_with("digraph"));

    let e = run(&[
        "eval",
        "--graph",
        aut.to_str().unwrap(),
        "--formula",
        "<error>T",
        "--json",
    ]);
    assert!(e.status.success());
    assert_eq!(json(&e)["count"], 3);
}

#[test]
fn check_present_holds_with_lasso() {
    let mut args = vec!["check", "--model", "builtin:present:4:5"];
    args.extend(PRESENT_45);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = json(&o);
    assert!(r.get("timings").is_none());
    for name in [
        "eq",
        "innocuous",
        "oracle_agreement",
        "no_zeno",
        "naive.errors_in_not_present",
    ] {
        assert_eq!(verdict(&r, name)["holds"], true, "{name}");
    }
    let ii = verdict(&r, "naive.not_present_in_errors");
    assert_eq!(ii["holds"], false);
    assert_eq!(ii["informational"], true);
    let trace: Vec<&str> = ii["witnessTrace"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l.as_str().unwrap())
        .collect();
    let split = ii["lassoSplit"].as_u64().unwrap() as usize;
    assert!(trace[split..].iter().all(|l| *l == "t"));
    assert_eq!(trace[..2], ["b", "start"]);
}

#[test]
fn check_output_is_deterministic() {
    let mut args = vec!["check", "--model", "builtin:present:4:5"];
    args.extend(PRESENT_45);
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let text = [
        "check",
        "--model",
        "builtin:present:4:5",
        "--pattern",
        "present",
        "--lo",
        "4",
        "--hi",
        "5",
        "--hi-open",
    ];
    assert_eq!(run(&text).stdout, run(&text).stdout);
}

#[test]
fn net_file_gives_the_builtin_report() {
    let file = net_file();
    let mut a = vec!["check", "--model", file.as_str()];
    a.extend(PRESENT_45);
    let mut b = vec!["check", "--model", "builtin:present:4:5"];
    b.extend(PRESENT_45);
    let (x, y) = (run(&a), run(&b));
    assert_eq!(x.status.code(), Some(0));
    assert_eq!(x.stdout, y.stdout);
}

#[test]
fn mismatched_window_exits_one() {
    let mut args = vec!["check", "--model", "builtin:present:3:4"];
    args.extend(PRESENT_45);
    let o = run(&args);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(verdict(&r, "eq")["holds"], false);
    assert!(!verdict(&r, "eq.correctness")["witnessState"].is_null());
}

#[test]
fn zeno_fixture_exits_one() {
    let o = run(&[
        "check",
        "--model",
        "builtin:zeno",
        "--pattern",
        "present",
        "--lo",
        "1",
        "--hi",
        "2",
        "--hi-open",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(verdict(&r, "innocuous")["holds"], false);
    assert_eq!(verdict(&r, "no_zeno")["holds"], false);
}

#[test]
fn mouse_error_is_reachable() {
    let o = run(&[
        "check",
        "--model",
        "builtin:mouse",
        "--reach",
        "error",
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = json(&o);
    let trace = r["verdicts"][0]["witnessTrace"].as_array().unwrap();
    assert_eq!(trace.iter().filter(|l| *l == "click").count(), 2);
    assert_eq!(trace.last().unwrap(), "error");
}

#[test]
fn compile_prints_formula() {
    let o = run(&["compile", "--regex", "a . b*", "--mode", "end"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "`0 o a * b");
}

#[test]
fn tautology_flag_sets_exit_code() {
    let yes = run(&[
        "eval",
        "--model",
        "builtin:mouse",
        "--formula",
        "T",
        "--tautology",
    ]);
    assert_eq!(yes.status.code(), Some(0));
    let no = run(&[
        "eval",
        "--model",
        "builtin:mouse",
        "--formula",
        "<error>T",
        "--tautology",
    ]);
    assert_eq!(no.status.code(), Some(1));
}

#[test]
fn dot_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.dot");
    let o = run(&[
        "dot",
        "--model",
        "builtin:mouse",
        "--highlight",
        "<error>T",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(std::fs::read_to_string(&out).unwrap().contains("->"));
}

#[test]
fn bad_input_exits_two() {
    for args in [
        vec![
            "eval",
            "--model",
            "builtin:mouse",
            "--formula",
            "min X | -X",
        ],
        vec!["eval", "--model", "builtin:mouse", "--formula", "<a"],
        vec!["gen", "--model", "builtin:present:5:4"],
        vec!["gen", "--model", "builtin:nosuch"],
        vec!["eval", "--graph", "/nonexistent/g.aut", "--formula", "T"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(
            String::from_utf8_lossy(&o.stderr).starts_with("error:"),
            "{args:?}"
        );
    }
}
