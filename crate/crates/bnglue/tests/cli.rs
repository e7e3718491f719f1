use std::io::Write;
use std::process::{Command, Stdio};

use bnglue::cli::{run, EXIT_FAIL, EXIT_OK, EXIT_USAGE};
use serde_json::Value;

fn bnglue(args: &str) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("bnglue").chain(args.split_whitespace());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn scalar_commands() {
    assert_eq!(
        bnglue("rho --d 5 --g 2 --r 3"),
        (EXIT_OK, "2\n".into(), String::new())
    );
    assert_eq!(bnglue("interp --d 5 --g 2 --r 3").1, "9\n");
    assert_eq!(bnglue("interp --d 3 --g 0 --r 1").1, "unbounded\n");
    assert_eq!(bnglue("rho --d 6 --g 7 --r 3").1, "-9\n");
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let (code, out, err) = bnglue("rho --d 5 --g 2 --r 3 --bogus 1");
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty() && err.contains("--bogus"));
    let (code, _, err) = bnglue("rho --d 5 --g 2 --r 0");
    assert_eq!(code, EXIT_USAGE);
    assert!(err.starts_with("error:"), "{err}");
    assert_eq!(bnglue("plan --d 6 --g 7 --r 3").0, EXIT_USAGE);
    assert_eq!(bnglue("verify --in /nonexistent/cert.json").0, EXIT_USAGE);
    assert_eq!(bnglue("--help").0, EXIT_OK);
}

#[test]
fn check_reports_every_slack() {
    let (code, out, _) = bnglue("check main --d1 4 --g1 1 --d2 5 --g2 2 --r 3 --n 6");
    assert_eq!(code, EXIT_OK);
    let verdict = json(&out);
    assert_eq!(verdict["outcome"], "pass");
    assert!(!verdict["checks"].as_array().unwrap().is_empty());
    let (code, out, _) = bnglue("check main --d1 4 --g1 1 --d2 5 --g2 2 --r 3 --n 7");
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(json(&out)["outcome"], "fail");
}

#[test]
fn certify_then_verify_round_trip() {
    let (code, out, _) = bnglue("certify main --d1 4 --g1 1 --d2 5 --g2 2 --r 3 --n 6");
    assert_eq!(code, EXIT_OK);
    let golden = include_str!("data/worked_example.json");
    assert_eq!(out, golden);

    let path = std::env::temp_dir().join(format!("bnglue-cli-{}.json", std::process::id()));
    std::fs::write(&path, &out).unwrap();
    let (code, report, _) = bnglue(&format!("verify --in {}", path.display()));
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&report)["ok"], true);

    // shrink the root's node count without touching the subtree
    let mut doc = json(&out);
    doc["instance"]["n"] = 5.into();
    doc["tree"]["instance"]["n"] = 5.into();
    std::fs::write(&path, doc.to_string()).unwrap();
    let (code, report, _) = bnglue(&format!("verify --in {}", path.display()));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(json(&report)["ok"], false);
}

#[test]
fn refusal_document() {
    let (code, out, _) = bnglue("certify main --d1 4 --g1 1 --d2 5 --g2 2 --r 3 --n 7");
    assert_eq!(code, EXIT_FAIL);
    let doc = json(&out);
    assert!(doc["refusal"]["reason"].is_string());
    assert_eq!(doc["instance"]["n"], 7);
}

#[test]
fn small_statements() {
    assert_eq!(
        bnglue("certify small-mid --d 6 --g 2 --r 3 --a 1").0,
        EXIT_OK
    );
    // a >= r - rho fails with rho = 1
    assert_eq!(
        bnglue("certify small-mid --d 4 --g 1 --r 3 --a 1").0,
        EXIT_FAIL
    );
    assert_eq!(
        bnglue("check small-hyp --d1 4 --g1 0 --d2 1 --g2 0 --r 3 --n 2").0,
        EXIT_OK
    );
}

#[test]
fn plan_and_table() {
    let (code, out, _) = bnglue("plan --d 6 --g 4 --r 3");
    assert_eq!(code, EXIT_OK);
    let plan = json(&out);
    assert_eq!(plan["outcome"], "found");
    assert_eq!(plan["n"], 5);
    let (code, out, _) = bnglue("plan --d 5 --g 2 --r 3");
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(json(&out)["outcome"], "infeasible");
    let (_, out, _) = bnglue("plan --d 8 --g 5 --r 3 --limit 2");
    assert_eq!(json(&out).as_array().unwrap().len(), 2);

    let (code, out, _) = bnglue("table interp --r 3 --d-max 6 --g-max 2");
    assert_eq!(code, EXIT_OK);
    assert!(out.lines().any(|l| l == "5,10,10,9"), "{out}");
}

#[test]
fn audit_on_a_small_grid() {
    let (code, out, _) = bnglue("audit agreement --r-min 3 --r-max 3 --d-cap 14");
    assert_eq!(code, EXIT_OK);
    let timed = json(&out);
    assert!(timed["report"]["instances_checked"].as_u64().unwrap() > 0);
    assert_eq!(timed["report"]["disagreement_count"], 0);
}

#[test]
fn binary_reads_stdin() {
    let exe = env!("CARGO_BIN_EXE_bnglue");
    let mut child = Command::new(exe)
        .args(["verify", "--in", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(include_bytes!("data/worked_example.json"))
        .unwrap();
    let output = child.wait_with_output().unwrap();
    assert_eq!(output.status.code(), Some(EXIT_OK));
    assert_eq!(json(&String::from_utf8(output.stdout).unwrap())["ok"], true);
}
