use super::ontology::Ontology;
use super::term::{Lit, Name, Node, TermId, TermStore};
use crate::bits::Bits;
use std::collections::{BTreeSet, HashMap};

/// A literal over closure indices: entry `idx`, positive or negated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CLit {
    pub idx: usize,
    pub pos: bool,
}

impl CLit {
    pub fn negate(self) -> CLit {
        CLit {
            idx: self.idx,
            pos: !self.pos,
        }
    }

    pub fn holds_in(self, t: &Bits) -> bool {
        t.contains(self.idx) == self.pos
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shape {
    Top,
    Atom(Name),
    And(Vec<CLit>),
    AtLeast { n: u32, role: Name, child: CLit },
}

/// Indexed non-negated members of the subconcept closure. Negations are
/// implicit: `not E` belongs to a type iff `E` does not.
#[derive(Debug, Clone)]
pub struct ClosureIndex {
    terms: Vec<TermId>,
    lookup: HashMap<TermId, usize>,
    shapes: Vec<Shape>,
}

impl ClosureIndex {
    /// Closure of the ontology's concept inclusions, `c0`, `d0` and `not d0`.
    pub fn new(store: &TermStore, o: &Ontology, c0: TermId, d0: TermId) -> Self {
        let mut roots = Vec::new();
        for &(l, r) in o.cis() {
            roots.push(l);
            roots.push(r);
        }
        roots.push(c0);
        roots.push(d0);
        Self::from_roots(store, &roots)
    }

    pub fn from_roots(store: &TermStore, roots: &[TermId]) -> Self {
        let mut cx = ClosureIndex {
            terms: Vec::new(),
            lookup: HashMap::new(),
            shapes: Vec::new(),
        };
        cx.insert(store, store.top());
        for &r in roots {
            for x in store.reachable(r) {
                cx.insert(store, x);
            }
        }
        cx
    }

    fn insert(&mut self, store: &TermStore, t: TermId) {
        let l = store.lit(t);
        if self.lookup.contains_key(&l.term) {
            return;
        }
        let clit = |cx: &ClosureIndex, x: TermId| {
            let l = store.lit(x);
            CLit {
                idx: cx.lookup[&l.term],
                pos: l.pos,
            }
        };
        let shape = match store.node(l.term) {
            Node::Top => Shape::Top,
            Node::Atom(n) => Shape::Atom(*n),
            Node::And(cs) => Shape::And(cs.iter().map(|&c| clit(self, c)).collect()),
            Node::AtLeast(n, r, c) => Shape::AtLeast {
                n: *n,
                role: *r,
                child: clit(self, *c),
            },
            Node::Not(_) => unreachable!("literal terms are never negations"),
        };
        self.lookup.insert(l.term, self.terms.len());
        self.terms.push(l.term);
        self.shapes.push(shape);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, idx: usize) -> TermId {
        self.terms[idx]
    }

    pub fn terms(&self) -> &[TermId] {
        &self.terms
    }

    pub fn shape(&self, idx: usize) -> &Shape {
        &self.shapes[idx]
    }

    pub fn index_of(&self, t: TermId) -> Option<usize> {
        self.lookup.get(&t).copied()
    }

    /// Closure literal for an arbitrary term, if it is in the closure.
    pub fn clit(&self, store: &TermStore, t: TermId) -> Option<CLit> {
        let l = store.lit(t);
        self.index_of(l.term).map(|idx| CLit { idx, pos: l.pos })
    }

    pub fn lit_of(&self, c: CLit) -> Lit {
        Lit {
            term: self.terms[c.idx],
            pos: c.pos,
        }
    }

    pub fn term_of(&self, store: &mut TermStore, c: CLit) -> TermId {
        store.term_of(self.lit_of(c))
    }

    /// Largest counting threshold, or 1 if there is none.
    pub fn m_star(&self) -> u32 {
        self.shapes
            .iter()
            .filter_map(|s| match s {
                Shape::AtLeast { n, .. } => Some(*n),
                _ => None,
            })
            .max()
            .unwrap_or(1)
    }

    /// Roles occurring in counting restrictions of the closure.
    pub fn roles(&self) -> BTreeSet<Name> {
        self.shapes
            .iter()
            .filter_map(|s| match s {
                Shape::AtLeast { role, .. } => Some(*role),
                _ => None,
            })
            .collect()
    }

    /// Atoms occurring in the closure.
    pub fn atoms(&self) -> Vec<(usize, Name)> {
        self.shapes
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Shape::Atom(n) => Some((i, *n)),
                _ => None,
            })
            .collect()
    }

    /// Indices of counting restrictions on `role`.
    pub fn restrictions_on(&self, role: Name) -> Vec<usize> {
        self.shapes
            .iter()
            .enumerate()
            .filter_map(|(i, s)| match s {
                Shape::AtLeast { role: r, .. } if *r == role => Some(i),
                _ => None,
            })
            .collect()
    }
}
