//! End-to-end tests of the command-line interface: output formats, exit
//! codes, and agreement between alternative computation methods.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pfaffian-stringy")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn stringy_methods_are_byte_identical() {
    let closed = run(&["stringy", "--n", "8", "--k", "2", "--kind", "usual"]);
    let strata =
        run(&["stringy", "--n", "8", "--k", "2", "--kind", "usual", "--method", "strata"]);
    assert!(closed.status.success());
    assert_eq!(closed.stdout, strata.stdout);
}

#[test]
fn cut_f_methods_are_byte_identical() {
    let closed = run(&["cut-f", "--n", "6", "--k", "2", "--i", "1"]);
    let recursive =
        run(&["cut-f", "--n", "6", "--k", "2", "--i", "1", "--method", "recursive"]);
    assert!(closed.status.success());
    assert_eq!(closed.stdout, recursive.stdout);
}

#[test]
fn json_output_is_valid() {
    let out = run(&["stringy", "--n", "6", "--k", "2", "--kind", "modified", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["n"], 6);
    assert_eq!(v["kind"], "modified");
    assert_eq!(v["polynomial"], true);
    // the rendered value string round-trips to the canonical value
    let parsed: pfaffian_stringy::RatFunc = v["value"].as_str().unwrap().parse().unwrap();
    let spec = pfaffian_stringy::pfaffian::PfaffianSpec::new(6, 2).unwrap();
    let direct = pfaffian_stringy::pfaffian::stringy_pf_closed(
        spec,
        pfaffian_stringy::pfaffian::DiscrepancyKind::Modified,
    )
    .unwrap();
    assert_eq!(parsed, direct);

    let out = run(&["sod", "--n", "6", "--k", "2", "--l", "9", "--side", "X", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["side"], "X");
    assert_eq!(v["residual"], "C_W");
    assert_eq!(v["blocks"].as_array().unwrap().len(), 1);
}

#[test]
fn csv_output_has_header() {
    let out = run(&["l-iso", "--n", "6", "--k", "1", "--i", "2", "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,k,i,value");
    assert!(lines.next().unwrap().starts_with("6,1,2,"));
}

#[test]
fn latex_output_renders_fractions() {
    // the stringy value renders as the factored product display
    let out = run(&["stringy", "--n", "6", "--k", "2", "--kind", "usual", "--format", "latex"]);
    let text = stdout(&out);
    assert!(text.contains("\\frac{"));
    assert!(text.contains("(q^{12} - 1)"));
    assert!(text.contains("(q - 1)"));
    // generic values render as a LaTeX fraction or polynomial
    let out = run(&["l-iso", "--n", "6", "--k", "1", "--i", "1", "--format", "latex"]);
    assert!(stdout(&out).contains("q^{7}"));
}

#[test]
fn verify_csv_has_point_schema() {
    let out = run(&["verify", "--suite", "lemma", "--n-max", "6", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next().unwrap(), "identity,point,status,lhs,rhs");
}

#[test]
fn relate_reports_types_and_gap() {
    let out = run(&["relate", "--n", "6", "--k", "1", "--l", "6"]);
    let text = stdout(&out);
    assert!(text.contains("euler gap: -3"));
    assert!(text.contains("X_W: CY"));
    assert!(text.contains("Y_W: Fano"));
}

#[test]
fn verify_suites_pass_with_exit_zero() {
    let out = run(&["verify", "--suite", "lemma", "--n-max", "8"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("PASS"));

    let out =
        run(&["verify", "--suite", "phi", "--exp-min", "-1", "--exp-max", "2", "--max-termination", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("PASS")).count(), 4);
}

#[test]
fn figure_check_passes() {
    let out = run(&["figure-check"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("= q ("));
    assert!(text.contains("PASS"));
}

#[test]
fn validation_errors_exit_2() {
    // out-of-range parameters
    assert_eq!(run(&["stringy", "--n", "5", "--k", "1", "--kind", "usual"]).status.code(), Some(2));
    assert_eq!(run(&["relate", "--n", "6", "--k", "3", "--l", "0"]).status.code(), Some(2));
    // malformed usage
    assert_eq!(run(&["stringy", "--n", "six"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    // inverted grid bounds
    assert_eq!(
        run(&["verify", "--suite", "phi", "--exp-min", "3", "--exp-max", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("pfaffian-stringy-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = run(&[
        "stringy", "--n", "6", "--k", "1", "--kind", "usual", "--format", "json", "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["k"], 1);
}
