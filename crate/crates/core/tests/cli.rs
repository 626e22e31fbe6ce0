use std::fs;
use std::process::Command;

use knowhow::cli::run;
use knowhow::corpus;

fn knowhow(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("knowhow").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn check_single_formula() {
    let (code, out, _) = knowhow(&["check", "examples/t5.ets", "u", "S{a} p & !H{a} p & !K{a} S{a} p"]);
    assert_eq!(code, 0);
    assert_eq!(out, "u |= S{a} p & !H{a} p & !K{a} S{a} p: true\n");

    let (code, out, _) = knowhow(&["check", "examples/t1.ets", "u", "H{a} p", "--witness"]);
    assert_eq!(code, 4);
    assert_eq!(out, "u |= H{a} p: false\nwitness: none\n");

    let (code, out, _) = knowhow(&["check", "examples/t1.ets", "u", "S{a} p", "--witness", "--naive"]);
    assert_eq!(code, 0);
    assert_eq!(out, "u |= S{a} p: true\nwitness: a=L\n");
}

#[test]
fn check_claims_files() {
    let (code, out, _) = knowhow(&["check", "--claims", "examples/t6.ets", "examples/t6.claims", "--witness"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("PASS line 2: v |= H{b,c} p (true)\n  witness: b=R c=R\n"));
    assert!(out.ends_with("2/2 claims passed\n"));
    for name in corpus::SYSTEMS {
        let sys = format!("examples/{name}.ets");
        let claims = format!("examples/{name}.claims");
        assert_eq!(knowhow(&["validate", &sys]).0, 0);
        assert_eq!(knowhow(&["check", "--claims", &sys, &claims]).0, 0, "{name}");
    }
}

#[test]
fn failing_claims_exit_with_four() {
    let dir = tempfile::tempdir().unwrap();
    let claims = dir.path().join("bad.claims");
    fs::write(&claims, "u |= H{a} p\nu |/= H{a} p\n").unwrap();
    let (code, out, _) = knowhow(&["check", "--claims", "examples/t1.ets", claims.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(out.contains("FAIL line 1: u |= H{a} p (false)"));
    assert!(out.contains("PASS line 2: u |/= H{a} p (false)"));
    assert!(out.ends_with("1/2 claims passed\n"));
}

#[test]
fn prove_scripts() {
    let (code, out, _) = knowhow(&["prove", "proofs/strategic_positive_introspection.prf"]);
    assert_eq!(code, 0);
    assert_eq!(out, "strategic_positive_introspection: accepted: H{a} p -> K{a} H{a} p\n");
    let (code, _, _) = knowhow(&["prove", "proofs/how_implies_know_strat.prf", "--lemmas", "proofs/lemmas.reg"]);
    assert_eq!(code, 0);

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.prf");
    fs::write(&bad, "1. p -> q [taut]\n").unwrap();
    let (code, out, _) = knowhow(&["prove", bad.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(out.ends_with("rejected at line 1: not a propositional tautology\n"));

    // without the lemma it relies on
    let empty = dir.path().join("empty.reg");
    fs::write(&empty, "# nothing\n").unwrap();
    let (code, out, _) =
        knowhow(&["prove", "proofs/how_implies_know_strat.prf", "--lemmas", empty.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert!(out.contains("rejected at line 5: unknown lemma `strategic_positive_introspection`"));
}

#[test]
fn exit_codes_for_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let unparsable = dir.path().join("bad.ets");
    fs::write(&unparsable, "agents: a\nvotes: L\nstates: u\ntrans u [a=Q] -> u\n").unwrap();
    let (code, _, err) = knowhow(&["validate", unparsable.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 4"), "{err}");

    let not_serial = dir.path().join("stuck.ets");
    fs::write(&not_serial, "agents: a\nvotes: L R\nstates: u\ntrans u [a=L] -> u\n").unwrap();
    let (code, out, _) = knowhow(&["validate", not_serial.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(out, "invalid: state u has no transition under profile a=R\n");
    assert_eq!(knowhow(&["check", not_serial.to_str().unwrap(), "u", "p"]).0, 3);

    assert_eq!(knowhow(&["check", "examples/t1.ets", "u", "S{a p"]).0, 2);
    assert_eq!(knowhow(&["check", "examples/t1.ets", "nowhere", "p"]).0, 2);
    assert_eq!(knowhow(&["validate", "no/such/file.ets"]).0, 2);
    assert_eq!(knowhow(&["frobnicate"]).0, 1);
    assert_eq!(knowhow(&["check", "examples/t1.ets", "u"]).0, 1);
    assert_eq!(knowhow(&["sweep", "--count", "many"]).0, 1);
    assert_eq!(knowhow(&["--help"]).0, 0);
}

#[test]
fn small_sweep_reports() {
    let (code, out, _) = knowhow(&["sweep", "--seed", "7", "--count", "10", "--depth", "1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("sweep: 10 systems, seeds 7..=16, pool depth 1\n"));
    assert!(out.contains("\nviolations=0\n"));
    assert!(out.contains("\nrule_failures=0\n"));
    assert!(!out.contains("elapsed"));
    assert_eq!(out, knowhow(&["sweep", "--seed", "7", "--count", "10", "--depth", "1"]).1);
}

#[test]
fn examples_list_and_extract() {
    let (code, out, _) = knowhow(&["examples"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), corpus::FILES.len());
    assert!(out.contains("examples/t8.ets\n"));

    let dir = tempfile::tempdir().unwrap();
    let (code, _, _) = knowhow(&["examples", "--extract", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    for (path, text) in corpus::FILES {
        assert_eq!(&fs::read_to_string(dir.path().join(path)).unwrap(), text);
    }
    // extracted files are read from disk, registry paths relative to the registry
    let reg = dir.path().join("proofs/lemmas.reg");
    let prf = dir.path().join("proofs/monotonicity_H.prf");
    assert_eq!(knowhow(&["prove", prf.to_str().unwrap(), "--lemmas", reg.to_str().unwrap()]).0, 0);
}

#[test]
fn binary_output_is_stable() {
    let bin = env!("CARGO_BIN_EXE_knowhow");
    let args = ["check", "--claims", "examples/t8.ets", "examples/t8.claims", "--witness"];
    let a = Command::new(bin).args(args).output().unwrap();
    let b = Command::new(bin).args(args).output().unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("PASS line 1: v |= S{} p (true)\n  witness: {}\n"), "{text}");

    let timed = Command::new(bin).args(["check", "examples/t1.ets", "u", "S{a} p", "--timing"]).output().unwrap();
    assert!(String::from_utf8(timed.stdout).unwrap().contains(" in "));
    let usage = Command::new(bin).arg("check").output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
}
