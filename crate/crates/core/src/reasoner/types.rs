//! Types over a closure: candidate enumeration, successor requirements and
//! type elimination.

use super::counting::solve_counts;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::semantics::FiniteInterpretation;
use crate::syntax::{CLit, ClosureIndex, Dialect, Name, Ontology, Shape, TermStore};
use std::collections::BTreeMap;

/// Free closure entries beyond which candidate enumeration refuses to run.
pub const MAX_FREE_ENTRIES: usize = 24;

/// Closure literals for the concept inclusions of `o`.
pub fn ci_lits(store: &TermStore, o: &Ontology, cx: &ClosureIndex) -> Vec<(CLit, CLit)> {
    o.cis()
        .iter()
        .map(|&(l, r)| {
            (
                cx.clit(store, l).expect("closure contains the ontology"),
                cx.clit(store, r).expect("closure contains the ontology"),
            )
        })
        .collect()
}

/// All Boolean-consistent subsets of the closure that satisfy every
/// concept inclusion, in lexicographic order of their free entries.
pub fn candidate_types(store: &TermStore, o: &Ontology, cx: &ClosureIndex) -> Result<Vec<Bits>> {
    let free: Vec<usize> = (0..cx.len())
        .filter(|&i| matches!(cx.shape(i), Shape::Atom(_) | Shape::AtLeast { .. }))
        .collect();
    if free.len() > MAX_FREE_ENTRIES {
        return Err(Error::Budget(format!(
            "{} free closure entries exceed the type enumeration limit",
            free.len()
        )));
    }
    let cis = ci_lits(store, o, cx);
    let mut out = Vec::new();
    for code in 0u64..(1u64 << free.len()) {
        let mut t = Bits::new();
        for i in 0..cx.len() {
            let holds = match cx.shape(i) {
                Shape::Top => true,
                Shape::And(cs) => cs.iter().all(|c| c.holds_in(&t)),
                _ => {
                    let k = free.binary_search(&i).expect("free entry");
                    code >> k & 1 == 1
                }
            };
            if holds {
                t.insert(i);
            }
        }
        if cis.iter().all(|(l, r)| !l.holds_in(&t) || r.holds_in(&t)) {
            out.push(t);
        }
    }
    out.sort();
    Ok(out)
}

/// Requirements every `role`-successor of an element of type `t` must meet:
/// `not Y` for each `exists s.Y` absent from `t` with `role ⊑ s`.
pub fn succ_alch(cx: &ClosureIndex, o: &Ontology, t: &Bits, role: Name) -> Vec<CLit> {
    let mut out = Vec::new();
    for i in 0..cx.len() {
        if let Shape::AtLeast { n: 1, role: s, child } = cx.shape(i) {
            if !t.contains(i) && o.subsumes(role, *s) {
                out.push(child.negate());
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Existential requirements `(role, C)` of a type.
pub fn existentials(cx: &ClosureIndex, t: &Bits) -> Vec<(usize, Name, CLit)> {
    t.iter()
        .filter_map(|i| match cx.shape(i) {
            Shape::AtLeast { role, child, .. } => Some((i, *role, *child)),
            _ => None,
        })
        .collect()
}

pub fn holds_all(t: &Bits, lits: &[CLit]) -> bool {
    lits.iter().all(|l| l.holds_in(t))
}

/// Whether `t` has an ALCH witness for every existential among `alive`.
pub fn alch_witnessed(cx: &ClosureIndex, o: &Ontology, t: &Bits, alive: &[&Bits]) -> bool {
    existentials(cx, t).into_iter().all(|(_, r, c)| {
        let succ = succ_alch(cx, o, t, r);
        alive.iter().any(|u| c.holds_in(u) && holds_all(u, &succ))
    })
}

/// Counting witnesses for `t` along `role` among `candidates`: counts per
/// candidate index, with every counting restriction on `role` honoured.
pub fn find_witnessing_function(
    cx: &ClosureIndex,
    t: &Bits,
    role: Name,
    candidates: &[&Bits],
) -> Option<Vec<(usize, u32)>> {
    let restr = cx.restrictions_on(role);
    assert!(restr.len() <= 64, "too many counting restrictions on one role");
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut childs = Vec::new();
    for (j, &i) in restr.iter().enumerate() {
        let Shape::AtLeast { n, child, .. } = cx.shape(i) else {
            unreachable!()
        };
        childs.push(*child);
        if t.contains(i) {
            lower.push((j, *n));
        } else {
            upper.push((j, n - 1));
        }
    }
    let mut reps: Vec<(u64, usize)> = Vec::new();
    for (ci, u) in candidates.iter().enumerate() {
        let mask = childs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.holds_in(u))
            .fold(0u64, |m, (j, _)| m | 1 << j);
        if !reps.iter().any(|&(m, _)| m == mask) {
            reps.push((mask, ci));
        }
    }
    let masks: Vec<u64> = reps.iter().map(|&(m, _)| m).collect();
    let counts = solve_counts(&masks, &lower, &upper)?;
    Some(
        reps.iter()
            .zip(counts)
            .filter(|&(_, c)| c > 0)
            .map(|(&(_, ci), c)| (ci, c))
            .collect(),
    )
}

/// Types that survive elimination: each needs witnesses among survivors.
pub fn realizable_types(store: &TermStore, o: &Ontology, cx: &ClosureIndex) -> Result<Vec<Bits>> {
    let mut alive = candidate_types(store, o, cx)?;
    let roles = cx.roles();
    loop {
        let refs: Vec<&Bits> = alive.iter().collect();
        let keep: Vec<bool> = alive
            .iter()
            .map(|t| match o.dialect() {
                Dialect::Alch => alch_witnessed(cx, o, t, &refs),
                Dialect::Alcq => roles
                    .iter()
                    .all(|&r| find_witnessing_function(cx, t, r, &refs).is_some()),
            })
            .collect();
        if keep.iter().all(|&k| k) {
            return Ok(alive);
        }
        alive = alive
            .into_iter()
            .zip(keep)
            .filter_map(|(t, k)| k.then_some(t))
            .collect();
    }
}

/// Successor counts per type; `None` stands for more than `m*`.
pub type WitnessingFunction = BTreeMap<Bits, Option<u32>>;

/// The witnessing function read off element `d` of a model along `role`.
pub fn witness_from_model(
    store: &TermStore,
    i: &FiniteInterpretation,
    d: usize,
    role: Name,
    cx: &ClosureIndex,
) -> WitnessingFunction {
    let m_star = cx.m_star();
    let mut counts: BTreeMap<Bits, u32> = BTreeMap::new();
    for e in i.successors(store.name_str(role), d) {
        *counts.entry(i.type_of(store, e, cx)).or_default() += 1;
    }
    counts
        .into_iter()
        .map(|(t, n)| (t, (n <= m_star).then_some(n)))
        .collect()
}

/// Whether `w` meets every counting restriction on `role` exactly as `t` says.
pub fn is_witnessing_function(cx: &ClosureIndex, t: &Bits, role: Name, w: &WitnessingFunction) -> bool {
    cx.restrictions_on(role).into_iter().all(|i| {
        let Shape::AtLeast { n, child, .. } = cx.shape(i) else {
            unreachable!()
        };
        let mut sum: Option<u32> = Some(0);
        for (u, c) in w {
            if child.holds_in(u) {
                sum = match (sum, c) {
                    (Some(a), Some(b)) => Some(a + b),
                    _ => None,
                };
            }
        }
        let reached = sum.map_or(true, |s| s >= *n);
        reached == t.contains(i)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_concept, parse_ontology};

    fn setup(onto: &str, c: &str, d: Dialect) -> (TermStore, Ontology, ClosureIndex, usize) {
        let mut s = TermStore::new();
        let o = parse_ontology(&mut s, onto, d).unwrap();
        let c0 = parse_concept(&mut s, c).unwrap();
        let top = s.top();
        let cx = ClosureIndex::new(&s, &o, c0, top);
        let idx = cx.index_of(s.lit(c0).term).unwrap();
        (s, o, cx, idx)
    }

    #[test]
    fn candidates_respect_cis() {
        let (s, o, cx, _) = setup("(implies A B)", "A", Dialect::Alch);
        let ts = candidate_types(&s, &o, &cx).unwrap();
        assert_eq!(ts.len(), 3);
    }

    #[test]
    fn elimination_removes_unwitnessed() {
        let (s, o, cx, i) = setup("(implies top (all r bot))", "(some r top)", Dialect::Alch);
        let ts = realizable_types(&s, &o, &cx).unwrap();
        assert!(ts.iter().all(|t| !t.contains(i)));
        assert!(!ts.is_empty());
    }

    #[test]
    fn hierarchy_propagates_universals() {
        let (s, o, cx, i) = setup(
            "(role-implies r s)",
            "(and (some r A) (all s (not A)))",
            Dialect::Alch,
        );
        let ts = realizable_types(&s, &o, &cx).unwrap();
        assert!(ts.iter().all(|t| !t.contains(i)));
    }

    #[test]
    fn counting_witnesses() {
        let (s, o, cx, i) = setup("", "(and (atleast 2 r A) (atmost 1 r top))", Dialect::Alcq);
        let ts = realizable_types(&s, &o, &cx).unwrap();
        assert!(ts.iter().all(|t| !t.contains(i)));
        let (s, o, cx, i) = setup("", "(and (atleast 2 r A) (atmost 2 r top))", Dialect::Alcq);
        let ts = realizable_types(&s, &o, &cx).unwrap();
        assert!(ts.iter().any(|t| t.contains(i)));
    }

    fn star(children: usize) -> (TermStore, ClosureIndex, FiniteInterpretation, Name) {
        let mut s = TermStore::new();
        let c0 = parse_concept(&mut s, "(and (atleast 2 r A) (atmost 1 r (not A)))").unwrap();
        let top = s.top();
        let cx = ClosureIndex::new(&s, &Ontology::empty(Dialect::Alcq), c0, top);
        let mut m = FiniteInterpretation::with_size(children + 1);
        for e in 1..=children {
            m.add_atom("A", e);
            m.add_edge("r", 0, e);
        }
        let r = s.name("r");
        (s, cx, m, r)
    }

    #[test]
    fn witness_of_leaf_is_empty() {
        let (s, cx, m, r) = star(0);
        let w = witness_from_model(&s, &m, 0, r, &cx);
        assert!(w.is_empty());
        assert!(is_witnessing_function(&cx, &m.type_of(&s, 0, &cx), r, &w));
    }

    #[test]
    fn witness_saturates_above_m_star() {
        let k = 4;
        let (s, cx, m, r) = star(k);
        assert!(cx.m_star() < k as u32);
        let w = witness_from_model(&s, &m, 0, r, &cx);
        assert_eq!(w.len(), 1);
        assert_eq!(w.values().next(), Some(&None));
        assert!(is_witnessing_function(&cx, &m.type_of(&s, 0, &cx), r, &w));
        let (s, cx, m, r) = star(1);
        let w = witness_from_model(&s, &m, 0, r, &cx);
        assert_eq!(w.values().next(), Some(&Some(1)));
    }

    #[test]
    fn witness_of_random_models() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut s = TermStore::new();
        let c0 = parse_concept(
            &mut s,
            "(and (atleast 2 r A) (atmost 1 r (not A)) (atleast 3 r top) (all r (or A B)))",
        )
        .unwrap();
        let top = s.top();
        let cx = ClosureIndex::new(&s, &Ontology::empty(Dialect::Alcq), c0, top);
        let r = s.name("r");
        for _ in 0..200 {
            let n = rng.gen_range(1..7);
            let mut m = FiniteInterpretation::with_size(n);
            for d in 0..n {
                for a in ["A", "B"] {
                    if rng.gen_bool(0.5) {
                        m.add_atom(a, d);
                    }
                }
                for e in 0..n {
                    if rng.gen_bool(0.4) {
                        m.add_edge("r", d, e);
                    }
                }
            }
            for d in 0..n {
                let w = witness_from_model(&s, &m, d, r, &cx);
                assert!(is_witnessing_function(&cx, &m.type_of(&s, d, &cx), r, &w));
            }
        }
    }
}
