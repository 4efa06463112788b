//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fail.

use dlinterp::families::{
    alch_k, alch_k_known_interpolant, alch_tower, alcq_tower, corpus, random_concept_over, small_model_instance,
    ProblemText,
};
use dlinterp::interpolate::{compute_interpolant, verify_interpolant, InterpolationProblem, NoInterpolant, Options, Outcome};
use dlinterp::mosaics::{self, decide_joint_consistency, extract_model, Config, Decision, Mode, Universe};
use dlinterp::reasoner::Reasoner;
use dlinterp::semantics::{check_joint_consistency_witness, enumerate};
use dlinterp::separators::alch::AlchSeparators;
use dlinterp::separators::{alcq, certify_mosaic, Strategy};
use dlinterp::syntax::{parse_concept, parse_concept_dag, parse_ontology, Dialect, TermStore};
use dlinterp_cli::{run, write_problem, EXIT_FOUND, EXIT_NONE};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::time::{Duration, Instant};

const FAMILY_LIMIT: Duration = Duration::from_secs(60);
const SMALL_LIMIT: Duration = Duration::from_secs(5);
const ALCH_CORPUS: usize = 200;
const ALCQ_CORPUS: usize = 100;
const ORACLE_CASES: usize = 150;
const ORACLE_DOMAIN: usize = 3;
const FIXPOINT_INSTANCES: usize = 50;
const FIXPOINT_ORDERS: usize = 10;
const FIXPOINT_MAX_TYPES: usize = 8;
const TOWER_CASES: usize = 50;
const TOWER_DEPTH: u32 = 3;
const SEED: u64 = 2024;

fn interpolate(dir: &Path, extra: &[&str]) -> (i32, String) {
    let mut args = vec!["dlinterp", "interpolate", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(args);
    (o.code, o.stdout)
}

fn dag_block(out: &str) -> String {
    out.lines()
        .skip_while(|l| !l.starts_with("verdict: interpolant"))
        .skip(1)
        .take_while(|l| !l.starts_with("verified:"))
        .map(|l| format!("{l}\n"))
        .collect()
}

fn decide(pt: &ProblemText, mode: Mode) -> (InterpolationProblem, Decision) {
    let mut p = InterpolationProblem::from_text(pt).unwrap();
    let nd = p.store.not(p.d0);
    let cfg = Config {
        mode,
        ..Config::default()
    };
    let d = decide_joint_consistency(&p.store, &p.ontology, p.c0, nd, &p.sigma, &cfg).unwrap();
    (p, d)
}

fn eliminated(d: &Decision) -> Vec<usize> {
    (0..d.universe.len()).filter(|&i| !d.universe.is_alive(i)).collect()
}

fn criterion_1(tmp: &Path) -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = true;
    for k in 1..=3 {
        let dir = tmp.join(format!("alch_k{k}"));
        write_problem(&dir, &alch_k(k)).unwrap();
        let t = Instant::now();
        let (code, out) = interpolate(&dir, &[]);
        let el = t.elapsed();
        let mut p = InterpolationProblem::from_text(&alch_k(k)).unwrap();
        let e = parse_concept_dag(&mut p.store, &dag_block(&out));
        let ours = e.is_ok_and(|e| verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, e));
        let known = parse_concept(&mut p.store, &alch_k_known_interpolant(k)).unwrap();
        let theirs = verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, known);
        let pass = code == EXIT_FOUND && out.contains("verified: true") && ours && theirs && el < FAMILY_LIMIT;
        ok &= pass;
        notes.push(format!("k={k} exit={code} ours={ours} known={theirs} {}ms", el.as_millis()));
    }
    let mut p = InterpolationProblem::from_text(&alch_k(2)).unwrap();
    let single = parse_concept(&mut p.store, "(some s1p A1)").unwrap();
    let rejected = !verify_interpolant(&p.store, &p.ontology, p.c0, p.d0, &p.sigma, single);
    notes.push(format!("k=2 single disjunct rejected={rejected}"));
    (ok && rejected, notes.join("; "))
}

fn small_case(tmp: &Path, name: &str, pt: &ProblemText) -> (i32, Duration) {
    let dir = tmp.join(name);
    write_problem(&dir, pt).unwrap();
    let t = Instant::now();
    let (code, _) = interpolate(&dir, &[]);
    (code, t.elapsed())
}

fn criterion_2(tmp: &Path) -> (bool, String) {
    let pt = ProblemText {
        dialect: Dialect::Alcq,
        ontology: String::new(),
        left: "(atleast 2 r top)".into(),
        right: "(atleast 2 r top)".into(),
        signature: "r".into(),
    };
    let (code, el) = small_case(tmp, "alcq_self", &pt);
    (code == EXIT_NONE && el < SMALL_LIMIT, format!("exit={code} {}ms", el.as_millis()))
}

fn criterion_3(tmp: &Path) -> (bool, String) {
    let pt = ProblemText {
        dialect: Dialect::Alch,
        ontology: "(implies A B)".into(),
        left: "A".into(),
        right: "B".into(),
        signature: String::new(),
    };
    let (code, el) = small_case(tmp, "sig_gap", &pt);
    let mut p = InterpolationProblem::from_text(&pt).unwrap();
    let res = compute_interpolant(&mut p, &Options::default()).unwrap();
    let witness = match res.outcome {
        Outcome::None(NoInterpolant::Witness { model, .. }) => {
            let nd = p.store.not(p.d0);
            let i = &model.interp;
            check_joint_consistency_witness(&p.store, &p.ontology, p.c0, nd, &p.sigma, i, model.e1, i, model.e2)
        }
        _ => false,
    };
    (
        code == EXIT_NONE && witness && el < SMALL_LIMIT,
        format!("exit={code} witness={witness} {}ms", el.as_millis()),
    )
}

fn criterion_4() -> (bool, String) {
    let (mut seps, mut bad) = ([0usize; 2], 0usize);
    for pt in corpus(Dialect::Alch, ALCH_CORPUS, SEED) {
        let (mut p, d) = decide(&pt, Mode::Lazy);
        let ids = eliminated(&d);
        let mut s = AlchSeparators::new(&d, &mut p.store, Strategy::Auto);
        let per: Vec<_> = ids.iter().map(|&i| s.mosaic(i)).collect();
        drop(s);
        let r = Reasoner::new(&p.ontology);
        for (&i, sep) in ids.iter().zip(per) {
            seps[0] += 1;
            match sep {
                Ok(sep) if certify_mosaic(&p.store, &r, &d.ctx, &d.universe.mosaics[i], &sep).is_certified() => {}
                _ => bad += 1,
            }
        }
    }
    for pt in corpus(Dialect::Alcq, ALCQ_CORPUS, SEED) {
        let (mut p, d) = decide(&pt, Mode::Exhaustive);
        let r = Reasoner::new(&p.ontology);
        let ids = eliminated(&d);
        seps[1] += ids.len();
        match alcq::general_separator(&mut p.store, &r, &d, 1 << 22) {
            Ok(sep) => {
                for i in ids {
                    let m = &d.universe.mosaics[i];
                    if !certify_mosaic(&p.store, &r, &d.ctx, m, &sep.restrict(m)).is_certified() {
                        bad += 1;
                    }
                }
            }
            Err(_) => bad += ids.len(),
        }
    }
    (
        bad == 0,
        format!(
            "{ALCH_CORPUS} ALCH + {ALCQ_CORPUS} ALCQ instances, {} + {} separators, {bad} failures",
            seps[0], seps[1]
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let atoms = ["A".to_string(), "B".to_string()];
    let roles = ["r".to_string()];
    let (mut agree, mut total) = (0, 0);
    for k in 0..ORACLE_CASES {
        let dialect = if k % 2 == 0 { Dialect::Alch } else { Dialect::Alcq };
        let (o, c) = small_model_instance(&mut rng, dialect == Dialect::Alcq);
        let mut s = TermStore::new();
        let onto = parse_ontology(&mut s, &o, dialect).unwrap();
        let ct = parse_concept(&mut s, &c).unwrap();
        let expected = enumerate::sat_bounded(&s, &onto, ct, &atoms, &roles, ORACLE_DOMAIN);
        total += 1;
        agree += usize::from(Reasoner::new(&onto).sat(&s, ct) == expected);
    }
    let (mut consistent, mut certified) = (0, 0);
    for pt in corpus(Dialect::Alch, ALCH_CORPUS, SEED + 1) {
        let (p, d) = decide(&pt, Mode::Lazy);
        let model = extract_model(&p.store, &d).ok();
        let mut p = p;
        let nd = p.store.not(p.d0);
        let ok = model.is_some_and(|m| {
            let i = &m.interp;
            check_joint_consistency_witness(&p.store, &p.ontology, p.c0, nd, &p.sigma, i, m.e1, i, m.e2)
        });
        consistent += usize::from(d.is_consistent());
        certified += usize::from(ok == d.is_consistent());
    }
    (
        agree == total && certified == ALCH_CORPUS,
        format!(
            "sat {agree}/{total} agree (domain <= {ORACLE_DOMAIN}); extract_model {certified}/{ALCH_CORPUS} agree ({consistent} consistent)"
        ),
    )
}

fn criterion_6(tmp: &Path) -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut checked = 0;
    let mut mismatches = 0;
    let pool = corpus(Dialect::Alch, 120, SEED + 2).into_iter().chain(corpus(Dialect::Alcq, 60, SEED + 3));
    for pt in pool {
        if checked == FIXPOINT_INSTANCES {
            break;
        }
        if decide(&pt, Mode::Lazy).1.ctx.types.len() > FIXPOINT_MAX_TYPES {
            continue;
        }
        let (_, d) = decide(&pt, Mode::Exhaustive);
        let reference = d.universe.alive();
        let mut order: Vec<usize> = (0..d.universe.len()).collect();
        for _ in 0..FIXPOINT_ORDERS {
            order.shuffle(&mut rng);
            let mut u = Universe::full(d.ctx.types.len(), 1 << 16).unwrap();
            match pt.dialect {
                Dialect::Alch => mosaics::alch::eliminate_in_order(&d.ctx, &mut u, &order),
                Dialect::Alcq => mosaics::alcq::eliminate_in_order(&d.ctx, &mut u, &order, 1 << 22).unwrap(),
            }
            mismatches += usize::from(u.alive() != reference);
        }
        checked += 1;
    }
    let dir = tmp.join("determinism");
    write_problem(&dir, &alch_k(2)).unwrap();
    let a = interpolate(&dir, &["--emit-trace"]);
    let b = interpolate(&dir, &["--emit-trace"]);
    let c = interpolate(&dir, &["--emit-trace", "--sequential"]);
    let identical = a == b && b == c;
    (
        checked == FIXPOINT_INSTANCES && mismatches == 0 && identical,
        format!(
            "{checked} instances x {FIXPOINT_ORDERS} orders, {mismatches} mismatches; output identical={identical}"
        ),
    )
}

fn criterion_7() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut fails = [0, 0];
    for (slot, pt) in [alch_tower(), alcq_tower()].iter().enumerate() {
        let mut p = InterpolationProblem::from_text(pt).unwrap();
        let r = Reasoner::new(&p.ontology);
        let roles: &[&str] = if slot == 0 { &["s", "sp"] } else { &["r", "s", "sp"] };
        for _ in 0..TOWER_CASES {
            let f = random_concept_over(&mut rng, &["A", "B"], roles, TOWER_DEPTH, false);
            let f = parse_concept(&mut p.store, &f).unwrap();
            let (lhs, rhs) = if slot == 0 {
                let s = p.store.name("s");
                let sp = p.store.name("sp");
                (p.store.forall(s, f), p.store.exists(sp, f))
            } else {
                let r = p.store.name("r");
                (p.store.exists(r, f), p.store.forall(r, f))
            };
            let goal = p.store.implies(lhs, rhs);
            fails[slot] += usize::from(!r.entails(&p.store, p.c0, goal));
        }
    }
    (
        fails == [0, 0],
        format!("alch-tower {} and alcq-tower {} failures of {TOWER_CASES} each", fails[0], fails[1]),
    )
}

fn criterion_8() -> (bool, String) {
    let (mut runs, mut bad) = (0, 0);
    for pt in corpus(Dialect::Alch, ALCH_CORPUS, SEED + 4) {
        let (p, d) = decide(&pt, Mode::Lazy);
        if !d.is_consistent() {
            continue;
        }
        runs += 1;
        let Ok(w) = extract_model(&p.store, &d) else {
            bad += 1;
            continue;
        };
        let i = &w.interp;
        let typed = w
            .elements
            .iter()
            .enumerate()
            .all(|(e, &(t, _))| i.type_of(&p.store, e, &d.ctx.cx) == d.ctx.types[t]);
        if !(i.is_model(&p.store, &p.ontology) && typed && w.z.is_bisimulation(i, i, &p.sigma)) {
            bad += 1;
        }
    }
    (runs > 0 && bad == 0, format!("{runs} consistent runs, {bad} failures"))
}

fn main() {
    let tmp = tempfile::tempdir().unwrap();
    let results: Vec<(u32, &str, (bool, String))> = vec![
        (1, "worked example k=1..3 (< 60 s per k)", criterion_1(tmp.path())),
        (2, "ALCQ nonexistence (< 5 s)", criterion_2(tmp.path())),
        (3, "signature gap with certified witness (< 5 s)", criterion_3(tmp.path())),
        (4, "separator soundness corpus (0 failures)", criterion_4()),
        (5, "oracle equivalence (100% agreement)", criterion_5()),
        (6, "fixpoint determinism", criterion_6(tmp.path())),
        (7, "tower entailments (0 failures)", criterion_7()),
        (8, "witness model construction", criterion_8()),
    ];
    let mut failed = 0;
    for (n, name, (pass, detail)) in &results {
        println!("criterion {n} {}: {name}: {detail}", if *pass { "PASS" } else { "FAIL" });
        failed += usize::from(!pass);
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
