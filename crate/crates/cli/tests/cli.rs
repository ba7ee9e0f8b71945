use std::path::PathBuf;
use std::process::{Command, Output};

use halfgraph::{read_manifest, verify_stable, Report, EXIT_INPUT, EXIT_RESOURCE, EXIT_STABLE, EXIT_UNSTABLE};
use halfgraph_core::qe::{eliminate_quantifiers, SemilinearSet};
use halfgraph_core::stability::analyze_set;
use halfgraph_core::{parse, StabilityVerdict};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(format!("{name}.problem"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_halfgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_fixture(cmd: &str, name: &str, extra: &[&str]) -> (i32, String) {
    let path = fixture(name);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = run(&args);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json_report(cmd: &str, name: &str, extra: &[&str]) -> (i32, Report) {
    let mut args = vec!["--json"];
    args.extend_from_slice(extra);
    let (code, out) = run_fixture(cmd, name, &args);
    (code, serde_json::from_str(&out).expect("valid report JSON"))
}

#[test]
fn exit_codes_follow_verdict() {
    assert_eq!(run_fixture("check", "doag_lower", &[]).0, EXIT_UNSTABLE);
    assert_eq!(run_fixture("check", "doag_diagonal", &[]).0, EXIT_STABLE);
    assert_eq!(run_fixture("check", "dlo_l_shape", &["--verify"]).0, EXIT_STABLE);
}

#[test]
fn decompose_section_has_rewritten_piece() {
    let (code, r) = json_report("decompose", "doag_section", &["--verify"]);
    assert_eq!(code, EXIT_STABLE);
    assert_eq!(r.pieces.len(), 1);
    assert_eq!(r.pieces[0].x, "(< x2 (* 2 x1))");
    assert!(r.checks_passed() && r.checks.len() == 4);
}

#[test]
fn witness_has_requested_length() {
    let (code, r) = json_report("witness", "doag_sum_positive", &["--length", "10", "--verify"]);
    assert_eq!(code, EXIT_UNSTABLE);
    let w = r.witness.expect("witness");
    assert_eq!((w.k, w.a.len(), w.b.len()), (10, 10, 10));
    assert_eq!(r.checks.get("ladder_k10"), Some(&true));
    assert!(r.facet.is_some());
}

#[test]
fn witness_length_zero_is_input_error() {
    assert_eq!(run_fixture("witness", "doag_lower", &["--length", "0"]).0, EXIT_INPUT);
}

#[test]
fn input_errors() {
    assert_eq!(
        run(&["check", "/nonexistent/file.problem"]).status.code(),
        Some(EXIT_INPUT)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(EXIT_INPUT));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.problem");
    std::fs::write(&bad, "theory doag\nvars x: x1 ; y: y1\nformula (< x1\n").unwrap();
    let out = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn tiny_budget_is_resource_error() {
    assert_eq!(
        run_fixture("oracle", "doag_lower", &["--max-k", "3", "--budget", "2"]).0,
        EXIT_RESOURCE
    );
}

#[test]
fn oracle_reports_longest_ladder() {
    let (code, r) = json_report("oracle", "dlo_diagonal_or_rectangle", &["--max-k", "4", "--verify"]);
    assert_eq!(code, EXIT_STABLE);
    assert_eq!(r.oracle.unwrap().longest, 3);
    assert_eq!(r.checks.get("oracle_ladder"), Some(&true));

    let (code, r) = json_report("oracle", "doag_lower", &["--max-k", "3"]);
    assert_eq!(code, EXIT_UNSTABLE);
    assert_eq!(r.verdict, "unstable");
}

#[test]
fn json_round_trips() {
    let (_, r) = json_report("decompose", "dlo_l_shape", &["--verify"]);
    let again: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(r, again);
}

#[test]
fn same_seed_same_output() {
    let a = run_fixture("decompose", "doag_two_boxes", &["--json", "--verify", "--seed", "7"]).1;
    let b = run_fixture("decompose", "doag_two_boxes", &["--json", "--verify", "--seed", "7"]).1;
    assert_eq!(a, b);
}

#[test]
fn human_output_lists_pieces() {
    let (_, out) = run_fixture("decompose", "dlo_diagonal_or_rectangle", &[]);
    assert!(out.starts_with("verdict: stable (2 pieces)"));
    assert!(out.contains("piece 2:"));
}

#[test]
fn manifest_parsing() {
    let m = read_manifest("# header\na stable 4\nb unstable # note\n\n");
    assert_eq!(m.len(), 2);
    assert_eq!(m["a"], "stable");
    assert_eq!(m["b"], "unstable");
}

fn stable_pieces(
    name: &str,
) -> (
    SemilinearSet,
    halfgraph_core::Partition,
    Vec<halfgraph_core::stability::SpecialStablePiece>,
) {
    let p = parse(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    let d = eliminate_quantifiers(&p).unwrap();
    let (StabilityVerdict::Stable(pieces), _) = analyze_set(&d, &p.partition, p.theory).unwrap() else {
        panic!("{name} should be stable");
    };
    (d, p.partition, pieces)
}

#[test]
fn dropping_a_piece_is_caught() {
    let (d, partition, mut pieces) = stable_pieces("doag_two_boxes");
    assert!(verify_stable(&d, &pieces, &partition, 1)
        .unwrap()
        .values()
        .all(|&ok| ok));
    assert!(pieces.len() > 1);
    pieces.pop();
    let checks = verify_stable(&d, &pieces, &partition, 1).unwrap();
    assert!(!checks["decomposition_union"]);
}

#[test]
fn widening_a_factor_is_caught() {
    let (d, partition, mut pieces) = stable_pieces("doag_quadrant");
    pieces[0].x = SemilinearSet::universe(partition.x.clone());
    let checks = verify_stable(&d, &pieces, &partition, 1).unwrap();
    assert!(!checks["decomposition_inside"]);
    assert!(!checks["decomposition_union"]);
}
