//! Finite interpretations, concept evaluation, model checking and maximal
//! Σ-bisimulations between two interpretations.

use crate::bits::Bits;
use crate::syntax::{ClosureIndex, Node, Ontology, Signature, TermId, TermStore};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteInterpretation {
    labels: Vec<String>,
    atoms: BTreeMap<String, Bits>,
    roles: BTreeMap<String, Vec<BTreeSet<usize>>>,
}

impl FiniteInterpretation {
    /// Panics if `labels` is empty: interpretations have nonempty domains.
    pub fn new(labels: Vec<String>) -> Self {
        assert!(!labels.is_empty(), "interpretation domain must be nonempty");
        FiniteInterpretation {
            labels,
            atoms: BTreeMap::new(),
            roles: BTreeMap::new(),
        }
    }

    pub fn with_size(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("d{i}")).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, d: usize) -> &str {
        &self.labels[d]
    }

    pub fn element(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn add_atom(&mut self, a: &str, d: usize) {
        self.atoms.entry(a.to_string()).or_default().insert(d);
    }

    pub fn add_edge(&mut self, r: &str, d: usize, e: usize) {
        let n = self.labels.len();
        self.roles
            .entry(r.to_string())
            .or_insert_with(|| vec![BTreeSet::new(); n])[d]
            .insert(e);
    }

    pub fn has_atom(&self, a: &str, d: usize) -> bool {
        self.atoms.get(a).is_some_and(|b| b.contains(d))
    }

    pub fn successors(&self, r: &str, d: usize) -> impl Iterator<Item = usize> + '_ {
        self.roles.get(r).into_iter().flat_map(move |adj| adj[d].iter().copied())
    }

    pub fn has_edge(&self, r: &str, d: usize, e: usize) -> bool {
        self.roles.get(r).is_some_and(|adj| adj[d].contains(&e))
    }

    pub fn atom_names(&self) -> impl Iterator<Item = &str> {
        self.atoms.keys().map(String::as_str)
    }

    pub fn role_names(&self) -> impl Iterator<Item = &str> {
        self.roles.keys().map(String::as_str)
    }

    pub fn edges(&self, r: &str) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        if let Some(adj) = self.roles.get(r) {
            for (d, es) in adj.iter().enumerate() {
                v.extend(es.iter().map(|&e| (d, e)));
            }
        }
        v
    }

    /// Text form accepted by `parse_model`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("(model (domain");
        for l in &self.labels {
            let _ = write!(out, " {l}");
        }
        out.push(')');
        for (a, ext) in &self.atoms {
            for d in ext.iter() {
                let _ = write!(out, "\n  (atom {a} {})", self.labels[d]);
            }
        }
        for r in self.roles.keys() {
            for (d, e) in self.edges(r) {
                let _ = write!(out, "\n  (edge {r} {} {})", self.labels[d], self.labels[e]);
            }
        }
        out.push_str(")\n");
        out
    }

    /// Extensions of every term reachable from `t`.
    fn eval_all(&self, store: &TermStore, t: TermId, memo: &mut HashMap<TermId, Bits>) {
        let n = self.len();
        for x in store.reachable(t) {
            if memo.contains_key(&x) {
                continue;
            }
            let ext = match store.node(x) {
                Node::Top => (0..n).collect(),
                Node::Atom(a) => self
                    .atoms
                    .get(store.name_str(*a))
                    .cloned()
                    .unwrap_or_default(),
                Node::Not(y) => {
                    let ey = &memo[y];
                    (0..n).filter(|&d| !ey.contains(d)).collect()
                }
                Node::And(cs) => (0..n)
                    .filter(|&d| cs.iter().all(|c| memo[c].contains(d)))
                    .collect(),
                Node::AtLeast(k, r, c) => {
                    let ec = &memo[c];
                    let r = store.name_str(*r);
                    (0..n)
                        .filter(|&d| {
                            self.successors(r, d).filter(|&e| ec.contains(e)).count() >= *k as usize
                        })
                        .collect()
                }
            };
            memo.insert(x, ext);
        }
    }

    pub fn eval_concept(&self, store: &TermStore, t: TermId) -> Bits {
        let mut memo = HashMap::new();
        self.eval_all(store, t, &mut memo);
        memo.remove(&t).unwrap_or_default()
    }

    pub fn is_model(&self, store: &TermStore, o: &Ontology) -> bool {
        let mut memo = HashMap::new();
        for &(l, r) in o.cis() {
            self.eval_all(store, l, &mut memo);
            self.eval_all(store, r, &mut memo);
            if !memo[&l].is_subset(&memo[&r]) {
                return false;
            }
        }
        o.ris().iter().all(|&(r, s)| {
            let (r, s) = (store.name_str(r), store.name_str(s));
            self.edges(r).into_iter().all(|(d, e)| self.has_edge(s, d, e))
        })
    }

    /// Closure entries true at `d`.
    pub fn type_of(&self, store: &TermStore, d: usize, cx: &ClosureIndex) -> Bits {
        let mut memo = HashMap::new();
        let mut t = Bits::new();
        for (i, &term) in cx.terms().iter().enumerate() {
            self.eval_all(store, term, &mut memo);
            if memo[&term].contains(d) {
                t.insert(i);
            }
        }
        t
    }
}

/// A relation between the domains of two interpretations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BisimRelation {
    rows: Vec<Bits>,
}

impl BisimRelation {
    pub fn contains(&self, d: usize, e: usize) -> bool {
        self.rows.get(d).is_some_and(|r| r.contains(e))
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(d, r)| r.iter().map(move |e| (d, e)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(Bits::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rows = vec![Bits::new(); n];
        for (d, e) in pairs {
            rows[d].insert(e);
        }
        BisimRelation { rows }
    }

    /// Direct Atom/Back/Forth check of every pair.
    pub fn is_bisimulation(
        &self,
        i: &FiniteInterpretation,
        j: &FiniteInterpretation,
        sigma: &Signature,
    ) -> bool {
        self.pairs()
            .into_iter()
            .all(|(d, e)| pair_ok(i, j, sigma, d, e, |x, y| self.contains(x, y)))
    }
}

fn sigma_atoms<'a>(
    i: &'a FiniteInterpretation,
    j: &'a FiniteInterpretation,
    sigma: &'a Signature,
) -> impl Iterator<Item = &'a str> {
    sigma.iter().filter(move |n| i.atoms.contains_key(*n) || j.atoms.contains_key(*n))
}

fn sigma_roles<'a>(
    i: &'a FiniteInterpretation,
    j: &'a FiniteInterpretation,
    sigma: &'a Signature,
) -> impl Iterator<Item = &'a str> {
    sigma.iter().filter(move |n| i.roles.contains_key(*n) || j.roles.contains_key(*n))
}

fn pair_ok(
    i: &FiniteInterpretation,
    j: &FiniteInterpretation,
    sigma: &Signature,
    d: usize,
    e: usize,
    rel: impl Fn(usize, usize) -> bool,
) -> bool {
    if sigma_atoms(i, j, sigma).any(|a| i.has_atom(a, d) != j.has_atom(a, e)) {
        return false;
    }
    sigma_roles(i, j, sigma).all(|r| {
        i.successors(r, d)
            .all(|d2| j.successors(r, e).any(|e2| rel(d2, e2)))
            && j.successors(r, e)
                .all(|e2| i.successors(r, d).any(|d2| rel(d2, e2)))
    })
}

/// Greatest Σ-bisimulation, by iterated elimination of pairs violating
/// Atom, Back or Forth.
pub fn max_sigma_bisimulation(
    i: &FiniteInterpretation,
    j: &FiniteInterpretation,
    sigma: &Signature,
) -> BisimRelation {
    let mut rows: Vec<Bits> = (0..i.len())
        .map(|d| {
            (0..j.len())
                .filter(|&e| sigma_atoms(i, j, sigma).all(|a| i.has_atom(a, d) == j.has_atom(a, e)))
                .collect()
        })
        .collect();
    loop {
        let mut removed = Vec::new();
        for (d, row) in rows.iter().enumerate() {
            for e in row.iter() {
                if !pair_ok(i, j, sigma, d, e, |x, y| rows[x].contains(y)) {
                    removed.push((d, e));
                }
            }
        }
        if removed.is_empty() {
            break;
        }
        for (d, e) in removed {
            rows[d].remove(e);
        }
    }
    BisimRelation { rows }
}

/// Checks an explicit witness that `c0` and `d0` are jointly consistent
/// up to Σ-bisimulation under `o`.
#[allow(clippy::too_many_arguments)]
pub fn check_joint_consistency_witness(
    store: &TermStore,
    o: &Ontology,
    c0: TermId,
    d0: TermId,
    sigma: &Signature,
    i1: &FiniteInterpretation,
    e1: usize,
    i2: &FiniteInterpretation,
    e2: usize,
) -> bool {
    e1 < i1.len()
        && e2 < i2.len()
        && i1.is_model(store, o)
        && i2.is_model(store, o)
        && i1.eval_concept(store, c0).contains(e1)
        && i2.eval_concept(store, d0).contains(e2)
        && max_sigma_bisimulation(i1, i2, sigma).contains(e1, e2)
}

/// Brute-force enumeration of all interpretations over small domains.
/// Exponential; intended as a test oracle only.
pub mod enumerate {
    use super::*;

    pub const MAX_DOMAIN: usize = 3;

    /// Calls `f` on every interpretation with domain size in `1..=max_size`
    /// over the given atoms and roles, stopping early if `f` returns true.
    pub fn any_interpretation(
        max_size: usize,
        atoms: &[String],
        roles: &[String],
        mut f: impl FnMut(&FiniteInterpretation) -> bool,
    ) -> bool {
        for n in 1..=max_size.min(MAX_DOMAIN) {
            let atom_bits = n * atoms.len();
            let role_bits = n * n * roles.len();
            let total = atom_bits + role_bits;
            assert!(total < 40, "enumeration too large");
            for code in 0u64..(1u64 << total) {
                let mut m = FiniteInterpretation::with_size(n);
                let mut bit = 0;
                for a in atoms {
                    for d in 0..n {
                        if code >> bit & 1 == 1 {
                            m.add_atom(a, d);
                        }
                        bit += 1;
                    }
                }
                for r in roles {
                    m.roles.entry(r.clone()).or_insert_with(|| vec![BTreeSet::new(); n]);
                    for d in 0..n {
                        for e in 0..n {
                            if code >> bit & 1 == 1 {
                                m.add_edge(r, d, e);
                            }
                            bit += 1;
                        }
                    }
                }
                if f(&m) {
                    return true;
                }
            }
        }
        false
    }

    /// Satisfiability of `c` under `o` in some model with at most
    /// `max_size` elements.
    pub fn sat_bounded(
        store: &TermStore,
        o: &Ontology,
        c: TermId,
        atoms: &[String],
        roles: &[String],
        max_size: usize,
    ) -> bool {
        any_interpretation(max_size, atoms, roles, |m| {
            m.is_model(store, o) && !m.eval_concept(store, c).is_empty()
        })
    }
}
