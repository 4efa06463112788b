use dlinterp_cli::{run, write_problem, EXIT_ERROR, EXIT_FOUND, EXIT_NONE};
use dlinterp::families::ProblemText;
use dlinterp::syntax::Dialect;
use std::fs;
use std::path::Path;

fn call(args: &[&str]) -> (i32, String) {
    let mut v = vec!["dlinterp"];
    v.extend_from_slice(args);
    let o = run(v);
    (o.code, o.stdout)
}

fn problem(dir: &Path, dialect: Dialect, onto: &str, l: &str, r: &str, sig: &str) {
    write_problem(
        dir,
        &ProblemText {
            dialect,
            ontology: onto.into(),
            left: l.into(),
            right: r.into(),
            signature: sig.into(),
        },
    )
    .unwrap();
}

#[test]
fn generated_family_interpolates() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("k1");
    let (code, _) = call(&["generate", "alch-k", "--k", "1", "--out", dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_FOUND);
    let (code, out) = call(&["interpolate", dir.to_str().unwrap()]);
    assert_eq!(code, EXIT_FOUND);
    assert!(out.contains("verified: true"));
    assert!(out.lines().any(|l| l.starts_with("root n")));
}

#[test]
fn counting_self_inclusion_has_none() {
    let tmp = tempfile::tempdir().unwrap();
    problem(tmp.path(), Dialect::Alcq, "", "(atleast 2 r top)", "(atleast 2 r top)", "r");
    let (code, out) = call(&["interpolate", tmp.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_NONE, "{out}");
}

#[test]
fn malformed_concept_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    problem(tmp.path(), Dialect::Alch, "", "(and A", "A", "A");
    let (code, out) = call(&["interpolate", tmp.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_ERROR);
    assert!(out.contains("byte 0"), "{out}");
}

#[test]
fn json_stats_keys() {
    let tmp = tempfile::tempdir().unwrap();
    problem(tmp.path(), Dialect::Alch, "", "(and A B)", "A", "A");
    let (code, out) = call(&["interpolate", tmp.path().to_str().unwrap(), "--output", "json-stats"]);
    assert_eq!(code, EXIT_FOUND);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        ["eliminated", "interpolant_dag_size", "mosaics", "rounds", "sat_calls", "types", "wall_ms"]
    );
}

#[test]
fn output_is_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("k2");
    call(&["generate", "alch-k", "--k", "2", "--out", dir.to_str().unwrap()]);
    let a = call(&["interpolate", dir.to_str().unwrap(), "--emit-trace"]);
    let b = call(&["interpolate", dir.to_str().unwrap(), "--emit-trace", "--sequential"]);
    assert_eq!(a, b);
}

#[test]
fn budget_exhaustion_is_an_error() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("k2");
    call(&["generate", "alch-k", "--k", "2", "--out", dir.to_str().unwrap()]);
    let (code, out) = call(&["interpolate", dir.to_str().unwrap(), "--exhaustive", "--max-mosaics", "4"]);
    assert_eq!(code, EXIT_ERROR, "{out}");
}

#[test]
fn entails_and_sat() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().join("o.dl");
    fs::write(&o, "(implies A B)\n").unwrap();
    assert_eq!(call(&["entails", "A", "B", "--ontology", o.to_str().unwrap()]).0, EXIT_FOUND);
    assert_eq!(call(&["entails", "B", "A", "--ontology", o.to_str().unwrap()]).0, EXIT_NONE);
    assert_eq!(call(&["sat", "(and (atleast 2 r A) (atmost 1 r top))"]).0, EXIT_NONE);
    assert_eq!(call(&["sat", "(atleast 2 r A)"]).0, EXIT_FOUND);
}

#[test]
fn bisim_with_empty_signature_is_full() {
    let tmp = tempfile::tempdir().unwrap();
    let m1 = tmp.path().join("m1");
    let m2 = tmp.path().join("m2");
    fs::write(&m1, "(model (domain a b) (atom A a) (edge r a b))").unwrap();
    fs::write(&m2, "(model (domain x y) (atom B y))").unwrap();
    let (code, out) = call(&["bisim", m1.to_str().unwrap(), m2.to_str().unwrap()]);
    assert_eq!(code, EXIT_FOUND);
    assert_eq!(out.lines().count(), 4);
}

#[test]
fn model_subcommand() {
    let tmp = tempfile::tempdir().unwrap();
    problem(tmp.path(), Dialect::Alch, "(implies A B)", "A", "B", "");
    let (code, out) = call(&["model", tmp.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_FOUND);
    assert!(out.contains("(model"));
    let dir = tmp.path().join("k1");
    call(&["generate", "alch-k", "--k", "1", "--out", dir.to_str().unwrap()]);
    assert_eq!(call(&["model", dir.to_str().unwrap()]).0, EXIT_NONE);
}

#[test]
fn generated_files_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("tower");
    call(&["generate", "alch-tower", "--out", dir.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(dir.join("left.dl")).unwrap().trim(), "(some r top)");
    assert_eq!(fs::read_to_string(dir.join("ontology.dl")).unwrap().lines().count(), 2);
    let dir = tmp.path().join("qtower");
    call(&["generate", "alcq-tower", "--out", dir.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(dir.join("left.dl")).unwrap().trim(), "(atmost 1 r top)");
    assert_eq!(fs::read_to_string(dir.join("dialect.txt")).unwrap().trim(), "alcq");
}

#[test]
fn random_family_is_seeded() {
    let tmp = tempfile::tempdir().unwrap();
    let read = |d: &Path| fs::read_to_string(d.join("left.dl")).unwrap() + &fs::read_to_string(d.join("right.dl")).unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        call(&["generate", "random", "--seed", "5", "--dialect", "alcq", "--out", d.to_str().unwrap()]);
    }
    assert_eq!(read(&a), read(&b));
    let (code, _) = call(&["interpolate", a.to_str().unwrap()]);
    assert!(code == EXIT_FOUND || code == EXIT_NONE);
}
