use dlinterp::families::{corpus, ProblemText};
use dlinterp::interpolate::{compute_interpolant, InterpolationProblem, NoInterpolant, Options, Outcome};
use dlinterp::mosaics::{self, decide_joint_consistency, extract_model, Config, Context, Decision, Mode, Record, Universe};
use dlinterp::reasoner::Reasoner;
use dlinterp::semantics::check_joint_consistency_witness;
use dlinterp::separators::alch::AlchSeparators;
use dlinterp::separators::{alcq, certify_mosaic, Strategy};
use dlinterp::syntax::Dialect;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

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

#[test]
fn alch_separators_certify() {
    let mut total = 0;
    for pt in corpus(Dialect::Alch, 200, 1) {
        let (mut p, d) = decide(&pt, Mode::Lazy);
        let ids = eliminated(&d);
        let mut seps = AlchSeparators::new(&d, &mut p.store, Strategy::Auto);
        let per: Vec<_> = ids.iter().map(|&i| seps.mosaic(i).unwrap()).collect();
        drop(seps);
        let r = Reasoner::new(&p.ontology);
        for (&i, sep) in ids.iter().zip(&per) {
            let cert = certify_mosaic(&p.store, &r, &d.ctx, &d.universe.mosaics[i], sep);
            assert!(cert.is_certified(), "{pt:?} m{i}: {cert:?}");
        }
        total += ids.len();
    }
    assert!(total > 200);
}

#[test]
fn alcq_separators_certify() {
    let (mut total, mut counting) = (0, 0);
    for pt in corpus(Dialect::Alcq, 100, 2) {
        let (mut p, d) = decide(&pt, Mode::Exhaustive);
        let r = Reasoner::new(&p.ontology);
        let sep = alcq::general_separator(&mut p.store, &r, &d, 1 << 22).unwrap();
        for i in eliminated(&d) {
            let m = &d.universe.mosaics[i];
            let cert = certify_mosaic(&p.store, &r, &d.ctx, m, &sep.restrict(m));
            assert!(cert.is_certified(), "{pt:?} m{i}: {cert:?}");
            total += 1;
        }
        counting += d
            .universe
            .trace
            .iter()
            .filter(|e| matches!(e.record, Record::StepAlcq { .. }))
            .count();
    }
    assert!(total > 100);
    assert!(counting > 0);
}

#[test]
fn decision_agrees_with_construction() {
    let mut found = [0, 0];
    for (k, pt) in corpus(Dialect::Alch, 100, 3)
        .into_iter()
        .chain(corpus(Dialect::Alcq, 50, 4))
        .enumerate()
    {
        let (p, d) = decide(&pt, Mode::Lazy);
        let entailed = Reasoner::new(&p.ontology).entails(&p.store, p.c0, p.d0);
        let mut p = InterpolationProblem::from_text(&pt).unwrap();
        let res = compute_interpolant(&mut p, &Options::default()).unwrap();
        match res.outcome {
            Outcome::Interpolant(_) => {
                assert!(entailed && !d.is_consistent(), "case {k}: {pt:?}");
                found[0] += 1;
            }
            Outcome::None(NoInterpolant::NotEntailed { .. }) => assert!(!entailed, "case {k}"),
            Outcome::None(_) => {
                assert!(entailed && d.is_consistent(), "case {k}: {pt:?}");
                found[1] += 1;
            }
        }
    }
    assert!(found[0] > 0 && found[1] > 0, "{found:?}");
}

#[test]
fn lazy_agrees_with_exhaustive() {
    let mut checked = 0;
    for pt in corpus(Dialect::Alch, 150, 5) {
        let (_, lazy) = decide(&pt, Mode::Lazy);
        if lazy.ctx.types.len() > 12 {
            continue;
        }
        let (_, full) = decide(&pt, Mode::Exhaustive);
        assert_eq!(lazy.is_consistent(), full.is_consistent(), "{pt:?}");
        checked += 1;
    }
    assert!(checked >= 30, "{checked}");
}

fn alive_after(ctx: &Context, order: &[usize], dialect: Dialect) -> Vec<usize> {
    let mut u = Universe::full(ctx.types.len(), 1 << 16).unwrap();
    match dialect {
        Dialect::Alch => mosaics::alch::eliminate_in_order(ctx, &mut u, order),
        Dialect::Alcq => mosaics::alcq::eliminate_in_order(ctx, &mut u, order, 1 << 22).unwrap(),
    }
    u.alive()
}

#[test]
fn fixpoint_is_order_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    let problems = corpus(Dialect::Alch, 80, 7).into_iter().chain(corpus(Dialect::Alcq, 30, 8));
    for pt in problems {
        if decide(&pt, Mode::Lazy).1.ctx.types.len() > 8 {
            continue;
        }
        let (_, d) = decide(&pt, Mode::Exhaustive);
        let reference = d.universe.alive();
        let mut order: Vec<usize> = (0..d.universe.len()).collect();
        for _ in 0..10 {
            order.shuffle(&mut rng);
            assert_eq!(alive_after(&d.ctx, &order, pt.dialect), reference, "{pt:?}");
        }
        checked += 1;
    }
    assert!(checked >= 50, "{checked}");
}

#[test]
fn witness_models_certify() {
    let mut checked = 0;
    for pt in corpus(Dialect::Alch, 200, 9) {
        let (mut p, d) = decide(&pt, Mode::Lazy);
        if !d.is_consistent() {
            continue;
        }
        let w = extract_model(&p.store, &d).unwrap();
        let i = &w.interp;
        assert!(i.is_model(&p.store, &p.ontology), "{pt:?}");
        for (e, &(t, _)) in w.elements.iter().enumerate() {
            assert_eq!(i.type_of(&p.store, e, &d.ctx.cx), d.ctx.types[t], "{pt:?}");
        }
        assert!(w.z.is_bisimulation(i, i, &p.sigma), "{pt:?}");
        let nd = p.store.not(p.d0);
        assert!(check_joint_consistency_witness(
            &p.store, &p.ontology, p.c0, nd, &p.sigma, i, w.e1, i, w.e2
        ));
        checked += 1;
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn literal_orientation() {
    let text = |sig: &str| ProblemText {
        dialect: Dialect::Alch,
        ontology: String::new(),
        left: "A".into(),
        right: "A".into(),
        signature: sig.into(),
    };
    let mut p = InterpolationProblem::from_text(&text("")).unwrap();
    let res = compute_interpolant(&mut p, &Options::default()).unwrap();
    assert!(matches!(res.outcome, Outcome::None(NoInterpolant::Witness { .. })));
    let mut p = InterpolationProblem::from_text(&text("A")).unwrap();
    let res = compute_interpolant(&mut p, &Options::default()).unwrap();
    let Outcome::Interpolant(e) = res.outcome else { panic!() };
    assert!(Reasoner::new(&p.ontology).equivalent(&p.store, e, p.c0));
}
