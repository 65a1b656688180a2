//! End-to-end tests of the command line interface.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lgres"))
}

fn problems(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/problems")
        .join(rel)
        .to_string_lossy()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn lgres")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn sat_reports_satisfiable_with_exit_zero() {
    let out = run(&["sat", &problems("sat/s01_running_example.lg")]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out), "status: Satisfiable\n");
}

#[test]
fn sat_reports_unsatisfiable_with_exit_zero() {
    let out = run(&["sat", &problems("unsat/u01_unary_clash.lg")]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out), "status: Unsatisfiable\n");
}

#[test]
fn sat_proof_ends_in_the_empty_clause() {
    let out = run(&["sat", &problems("unsat/u03_swap.lg"), "--proof"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.starts_with("status: Unsatisfiable\n"), "{text}");
    assert!(text.contains("[input]"), "{text}");
    assert!(text.trim_end().lines().last().unwrap().contains("$false"), "{text}");
}

#[test]
fn sat_resource_out_is_unknown_and_nonzero() {
    let out = run(&["sat", &problems("unsat/u06_skolem_chain.lg"), "--max-clauses", "2"]);
    assert!(!out.status.success(), "{out:?}");
    assert!(stdout(&out).starts_with("status: Unknown("), "{out:?}");
}

#[test]
fn parse_error_is_nonzero() {
    let out = run(&["sat", &problems("cli/parse_error.lg")]);
    assert!(!out.status.success(), "{out:?}");
    assert!(stdout(&out).starts_with("error: "), "{out:?}");
}

#[test]
fn missing_file_is_nonzero() {
    let out = run(&["sat", &problems("cli/no_such_file.lg")]);
    assert!(!out.status.success(), "{out:?}");
    assert!(stdout(&out).starts_with("error: "), "{out:?}");
}

#[test]
fn clausify_prints_guard_annotations() {
    let out = run(&["clausify", &problems("sat/s01_running_example.lg")]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(
        stdout(&out),
        "clause: r(sk1,sk2)  [ground]\n\
         clause: q(sk2)  [ground]\n\
         clause: def1(sk1,sk2)  [ground]\n\
         clause: ~def1(X,Y) | ~r(X,Z) | ~r(Z,Y) | p(sk3(X,Y,Z),Y)  \
         [guards: ~def1(X,Y), ~r(X,Z), ~r(Z,Y)]\n"
    );
}

#[test]
fn classify_prints_the_walkthrough_classes() {
    let out = run(&["classify", &problems("cli/classify_walkthrough.lg")]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(
        stdout(&out),
        "query q1: loosely_guarded\n\
         query q2: star (witness Y)\n\
         query q3: cloud (basis Y,Z)\n"
    );
}

#[test]
fn query_answers_per_query_lines() {
    let out = run(&["query", &problems("horn/h01_edge_conn.lg")]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out), "query q1: Entailed\nquery q2: NotEntailed\n");
}

#[test]
fn query_with_proof_and_oracle() {
    let out = run(&["query", &problems("horn/h13_skolem_prop.lg"), "--proof", "--oracle-check"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("query q1: Entailed"), "{text}");
    assert!(text.contains("proof:"), "{text}");
    assert!(text.contains("$false"), "{text}");
    assert!(text.contains("oracle q1: confirmed"), "{text}");
    assert!(text.contains("oracle q2: confirmed"), "{text}");
}

#[test]
fn restricted_mode_reports_unsupported_with_exit_zero() {
    let out = run(&[
        "query",
        &problems("cli/unsupported_query.lg"),
        "--mode",
        "restricted",
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(stdout(&out).starts_with("query q1: Unsupported("), "{out:?}");
}

#[test]
fn auto_mode_picks_horn_for_horn_theories() {
    // the same disconnected query is answerable through the Horn route
    let out = run(&["query", &problems("cli/unsupported_query.lg")]);
    assert!(out.status.success(), "{out:?}");
    assert_eq!(stdout(&out), "query q1: Entailed\n");
}

#[test]
fn stats_block_has_three_lines() {
    let out = run(&["sat", &problems("sat/s01_running_example.lg"), "--stats"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    let stats: Vec<&str> = text.lines().filter(|l| l.starts_with("stats: ")).collect();
    assert_eq!(stats.len(), 3, "{text}");
    assert!(stats[0].starts_with("stats: generated "), "{text}");
    assert!(stats[2].contains("max clause depth 1"), "{text}");
    assert!(stats[2].contains("wall time"), "{text}");
}

#[test]
fn assert_invariants_does_not_change_the_verdict() {
    let plain = run(&["sat", &problems("unsat/u17_nested_guard.lg")]);
    let checked = run(&["sat", &problems("unsat/u17_nested_guard.lg"), "--assert-invariants"]);
    assert!(plain.status.success() && checked.status.success());
    assert_eq!(stdout(&plain), stdout(&checked));
}

#[test]
fn jobs_fan_out_preserves_input_order_and_output() {
    let files = [
        problems("sat/s01_running_example.lg"),
        problems("unsat/u01_unary_clash.lg"),
        problems("sat/s02_facts_only.lg"),
    ];
    let serial = run(&["sat", &files[0], &files[1], &files[2]]);
    let parallel = run(&["sat", &files[0], &files[1], &files[2], "--jobs", "3"]);
    assert!(serial.status.success() && parallel.status.success());
    let text = stdout(&serial);
    assert_eq!(text, stdout(&parallel));
    // per-file headers in input order
    let headers: Vec<&str> = text.lines().filter(|l| l.starts_with("# ")).collect();
    assert_eq!(headers.len(), 3, "{text}");
    assert!(headers[0].ends_with("s01_running_example.lg"), "{text}");
    assert!(headers[1].ends_with("u01_unary_clash.lg"), "{text}");
    assert!(headers[2].ends_with("s02_facts_only.lg"), "{text}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = ["query", &problems("horn/h06_triangle.lg"), "--proof"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn one_failing_file_fails_the_batch_but_reports_all() {
    let out = run(&[
        "sat",
        &problems("sat/s02_facts_only.lg"),
        &problems("cli/parse_error.lg"),
    ]);
    assert!(!out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("status: Satisfiable"), "{text}");
    assert!(text.contains("error: "), "{text}");
}
