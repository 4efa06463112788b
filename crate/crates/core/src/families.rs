//! Generators for the parameterized example families, as problem texts in
//! the s-expression formats read by the parser.

use crate::syntax::Dialect;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemText {
    pub dialect: Dialect,
    pub ontology: String,
    pub left: String,
    pub right: String,
    pub signature: String,
}

/// Role hierarchy family with `k` branches. Roles `s{i}p` stand for the
/// primed roles. The problem is `O |= C ⊑ not D`.
pub fn alch_k(k: usize) -> ProblemText {
    assert!(k >= 1, "k must be positive");
    let mut ontology = String::new();
    for i in 1..=k {
        ontology.push_str(&format!("(role-implies r s{i}p)\n(role-implies s{i}p s{i})\n"));
    }
    let atoms: Vec<String> = (1..=k).map(|i| format!("A{i}")).collect();
    let left = format!("(and (some r B) (all r (or (not B) {})))", atoms.join(" "));
    let d: Vec<String> = (1..=k).map(|i| format!("(all s{i} (not A{i}))")).collect();
    let d = if k == 1 {
        d[0].clone()
    } else {
        format!("(and {})", d.join(" "))
    };
    let signature: Vec<String> = (1..=k).flat_map(|i| [format!("s{i}p"), format!("A{i}")]).collect();
    ProblemText {
        dialect: Dialect::Alch,
        ontology,
        left,
        right: format!("(not {d})"),
        signature: signature.join(" "),
    }
}

/// The interpolant `⊔ ∃s{i}p.A{i}` known for [`alch_k`].
pub fn alch_k_known_interpolant(k: usize) -> String {
    let ds: Vec<String> = (1..=k).map(|i| format!("(some s{i}p A{i})")).collect();
    if k == 1 {
        ds[0].clone()
    } else {
        format!("(or {})", ds.join(" "))
    }
}

/// Two super-roles of `r`, with `C0 = ∃r.⊤` and `Σ = {s, sp}`.
pub fn alch_tower() -> ProblemText {
    ProblemText {
        dialect: Dialect::Alch,
        ontology: "(role-implies r s)\n(role-implies r sp)\n".into(),
        left: "(some r top)".into(),
        right: "top".into(),
        signature: "s sp".into(),
    }
}

/// `C0 = (<= 1 r.⊤)` with `Σ = {r, s, sp}` and an empty ontology.
pub fn alcq_tower() -> ProblemText {
    ProblemText {
        dialect: Dialect::Alcq,
        ontology: String::new(),
        left: "(atmost 1 r top)".into(),
        right: "top".into(),
        signature: "r s sp".into(),
    }
}

/// Random concept text over atoms `A`, `B`, `C` and roles `r`, `s`.
pub fn random_concept<R: rand::Rng>(rng: &mut R, depth: u32, counting: bool) -> String {
    random_concept_over(rng, &["A", "B", "C"], &["r", "s"], depth, counting)
}

pub fn random_concept_over<R: rand::Rng>(
    rng: &mut R,
    atoms: &[&str],
    roles: &[&str],
    depth: u32,
    counting: bool,
) -> String {
    if depth == 0 || rng.gen_bool(0.3) {
        let a = atoms[rng.gen_range(0..atoms.len())];
        return if rng.gen_bool(0.5) { a.into() } else { format!("(not {a})") };
    }
    let role = roles[rng.gen_range(0..roles.len())];
    let x = random_concept_over(rng, atoms, roles, depth - 1, counting);
    match rng.gen_range(0..6) {
        0 => format!("(and {x} {})", random_concept_over(rng, atoms, roles, depth - 1, counting)),
        1 => format!("(or {x} {})", random_concept_over(rng, atoms, roles, depth - 1, counting)),
        2 => format!("(some {role} {x})"),
        3 => format!("(all {role} {x})"),
        4 if counting => format!("(atleast {} {role} {x})", rng.gen_range(1..=2)),
        5 if counting => format!("(atmost {} {role} {x})", rng.gen_range(0..=1)),
        _ => format!("(some {role} {x})"),
    }
}

fn boolean<R: rand::Rng>(rng: &mut R, depth: u32) -> String {
    if depth == 0 || rng.gen_bool(0.4) {
        let a = ["A", "B"][rng.gen_range(0..2)];
        return if rng.gen_bool(0.5) { a.into() } else { format!("(not {a})") };
    }
    let op = if rng.gen_bool(0.5) { "and" } else { "or" };
    format!("({op} {} {})", boolean(rng, depth - 1), boolean(rng, depth - 1))
}

fn small_conjunct<R: rand::Rng>(rng: &mut R, counting: bool) -> String {
    let mut parts = vec![boolean(rng, 1)];
    let mut demand = 0;
    while demand < 2 && rng.gen_bool(0.6) {
        if counting && demand == 0 && rng.gen_bool(0.4) {
            parts.push(format!("(atleast 2 r {})", boolean(rng, 1)));
            demand += 2;
        } else {
            parts.push(format!("(some r {})", boolean(rng, 1)));
            demand += 1;
        }
    }
    for _ in 0..rng.gen_range(0..3) {
        parts.push(format!("(all r {})", boolean(rng, 1)));
    }
    if counting && rng.gen_bool(0.5) {
        parts.push(format!("(atmost {} r {})", rng.gen_range(0..2), boolean(rng, 1)));
    }
    if parts.len() == 1 {
        return parts.pop().unwrap();
    }
    format!("(and {})", parts.join(" "))
}

/// Random `(ontology, concept)` over atoms `A`, `B` and role `r` that has a
/// model iff it has one with at most 3 elements.
///
/// Concepts are disjunctions of conjunctions of a Boolean part, at most two
/// demanded successors, and universal and at-most restrictions; axioms are
/// Boolean. Keeping only the demanded successors of the root preserves a
/// model of such a concept.
pub fn small_model_instance<R: rand::Rng>(rng: &mut R, counting: bool) -> (String, String) {
    let c = if rng.gen_bool(0.3) {
        format!("(or {} {})", small_conjunct(rng, counting), small_conjunct(rng, counting))
    } else {
        small_conjunct(rng, counting)
    };
    let o = if rng.gen_bool(0.5) {
        format!("(implies {} {})", boolean(rng, 1), boolean(rng, 1))
    } else {
        String::new()
    };
    (o, c)
}

/// Random problem with concepts of role depth at most `depth`, at most one inclusion, role inclusion `r ⊑ s` in
/// ALCH mode with probability one half, and a random signature. Half of
/// the problems have an entailed inclusion `C ⊑ C ⊔ X`.
pub fn random_problem<R: rand::Rng>(rng: &mut R, dialect: Dialect, depth: u32) -> ProblemText {
    let counting = dialect == Dialect::Alcq;
    let mut ontology = String::new();
    if rng.gen_bool(0.5) {
        let l = random_concept(rng, 1, counting);
        let r = random_concept(rng, 1, counting);
        ontology.push_str(&format!("(implies {l} {r})\n"));
    }
    if !counting && rng.gen_bool(0.5) {
        ontology.push_str("(role-implies r s)\n");
    }
    let left = random_concept(rng, depth, counting);
    let x = random_concept(rng, depth, counting);
    let right = if rng.gen_bool(0.5) {
        format!("(or {left} {x})")
    } else {
        x
    };
    let signature: Vec<&str> = ["A", "B", "C", "r", "s"]
        .into_iter()
        .filter(|_| rng.gen_bool(0.6))
        .collect();
    ProblemText {
        dialect,
        ontology,
        left,
        right,
        signature: signature.join(" "),
    }
}

pub const CORPUS_MAX_CLOSURE: usize = 12;
pub const CORPUS_MAX_ALCQ_TYPES: usize = 8;

/// `n` random problems with at most [`CORPUS_MAX_CLOSURE`] closure entries,
/// and in ALCQ mode at most [`CORPUS_MAX_ALCQ_TYPES`] realizable types.
/// ALCH problems use role depth 2 and ALCQ problems role depth 1.
pub fn corpus(dialect: Dialect, n: usize, seed: u64) -> Vec<ProblemText> {
    use crate::interpolate::InterpolationProblem;
    use crate::reasoner::realizable_types;
    use crate::syntax::ClosureIndex;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let depth = if dialect == Dialect::Alch { 2 } else { 1 };
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let pt = random_problem(&mut rng, dialect, depth);
        let Ok(mut p) = InterpolationProblem::from_text(&pt) else {
            continue;
        };
        let nd = p.store.not(p.d0);
        let cx = ClosureIndex::new(&p.store, &p.ontology, p.c0, nd);
        if cx.len() > CORPUS_MAX_CLOSURE {
            continue;
        }
        if dialect == Dialect::Alcq {
            match realizable_types(&p.store, &p.ontology, &cx) {
                Ok(ts) if ts.len() <= CORPUS_MAX_ALCQ_TYPES => {}
                _ => continue,
            }
        }
        out.push(pt);
    }
    out
}
