//! Hash-consed concept DAG.
//!
//! Every concept is interned in a [`TermStore`]; two concepts are
//! structurally equal iff their [`TermId`]s are equal. Constructors
//! canonicalize on the way in: double negation collapses, conjunctions are
//! flattened, sorted and deduplicated, `(>= 0 r.C)` becomes `top`, and
//! `bot` is stored as `not top`.

use std::collections::{HashMap, HashSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(u32);

impl TermId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for TermId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

/// Interned concept or role name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(u32);

impl Name {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    Top,
    Atom(Name),
    Not(TermId),
    /// At least two children, sorted, no duplicates, none of them an `And`.
    And(Vec<TermId>),
    AtLeast(u32, Name, TermId),
}

/// A closure literal: a non-negated term together with a polarity.
///
/// Because `not not C` is never stored, every term is either a positive
/// literal or the negation of one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub term: TermId,
    pub pos: bool,
}

impl Lit {
    pub fn pos(term: TermId) -> Lit {
        Lit { term, pos: true }
    }

    pub fn neg(term: TermId) -> Lit {
        Lit { term, pos: false }
    }

    pub fn negate(self) -> Lit {
        Lit {
            term: self.term,
            pos: !self.pos,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TermStore {
    nodes: Vec<Node>,
    index: HashMap<Node, TermId>,
    names: Vec<String>,
    name_index: HashMap<String, Name>,
}

impl Default for TermStore {
    fn default() -> Self {
        Self::new()
    }
}

impl TermStore {
    pub fn new() -> Self {
        let mut store = TermStore {
            nodes: Vec::new(),
            index: HashMap::new(),
            names: Vec::new(),
            name_index: HashMap::new(),
        };
        store.intern(Node::Top);
        store
    }

    fn intern(&mut self, node: Node) -> TermId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = TermId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, t: TermId) -> &Node {
        &self.nodes[t.index()]
    }

    pub fn name(&mut self, s: &str) -> Name {
        if let Some(&n) = self.name_index.get(s) {
            return n;
        }
        let n = Name(self.names.len() as u32);
        self.names.push(s.to_string());
        self.name_index.insert(s.to_string(), n);
        n
    }

    pub fn lookup_name(&self, s: &str) -> Option<Name> {
        self.name_index.get(s).copied()
    }

    pub fn name_str(&self, n: Name) -> &str {
        &self.names[n.index()]
    }

    pub fn top(&self) -> TermId {
        TermId(0)
    }

    pub fn bot(&mut self) -> TermId {
        let top = self.top();
        self.not(top)
    }

    pub fn atom(&mut self, s: &str) -> TermId {
        let n = self.name(s);
        self.intern(Node::Atom(n))
    }

    pub fn atom_named(&mut self, n: Name) -> TermId {
        self.intern(Node::Atom(n))
    }

    pub fn not(&mut self, t: TermId) -> TermId {
        match self.node(t) {
            Node::Not(inner) => *inner,
            _ => self.intern(Node::Not(t)),
        }
    }

    pub fn and<I: IntoIterator<Item = TermId>>(&mut self, children: I) -> TermId {
        let top = self.top();
        let mut flat = Vec::new();
        let mut bot = false;
        for c in children {
            match self.node(c) {
                Node::Top => {}
                Node::And(cs) => flat.extend_from_slice(cs),
                Node::Not(x) if *x == top => bot = true,
                _ => flat.push(c),
            }
        }
        if bot {
            return self.bot();
        }
        flat.sort_unstable();
        flat.dedup();
        match flat.len() {
            0 => top,
            1 => flat[0],
            _ => self.intern(Node::And(flat)),
        }
    }

    pub fn or<I: IntoIterator<Item = TermId>>(&mut self, children: I) -> TermId {
        let negs: Vec<TermId> = children.into_iter().map(|c| self.not(c)).collect();
        let conj = self.and(negs);
        self.not(conj)
    }

    pub fn implies(&mut self, a: TermId, b: TermId) -> TermId {
        let na = self.not(a);
        self.or([na, b])
    }

    pub fn at_least(&mut self, n: u32, role: Name, c: TermId) -> TermId {
        if n == 0 {
            return self.top();
        }
        self.intern(Node::AtLeast(n, role, c))
    }

    /// `(<= n r.C)`, i.e. `not (>= n+1 r.C)`.
    pub fn at_most(&mut self, n: u32, role: Name, c: TermId) -> TermId {
        let al = self.at_least(n + 1, role, c);
        self.not(al)
    }

    pub fn exists(&mut self, role: Name, c: TermId) -> TermId {
        self.at_least(1, role, c)
    }

    pub fn forall(&mut self, role: Name, c: TermId) -> TermId {
        let nc = self.not(c);
        let ex = self.exists(role, nc);
        self.not(ex)
    }

    pub fn lit(&self, t: TermId) -> Lit {
        match self.node(t) {
            Node::Not(inner) => Lit::neg(*inner),
            _ => Lit::pos(t),
        }
    }

    pub fn term_of(&mut self, l: Lit) -> TermId {
        if l.pos {
            l.term
        } else {
            self.not(l.term)
        }
    }

    /// The term for a literal if it is already interned.
    pub fn find_term(&self, l: Lit) -> Option<TermId> {
        if l.pos {
            Some(l.term)
        } else {
            self.index.get(&Node::Not(l.term)).copied()
        }
    }

    pub fn children(&self, t: TermId) -> Vec<TermId> {
        match self.node(t) {
            Node::Top | Node::Atom(_) => Vec::new(),
            Node::Not(x) => vec![*x],
            Node::And(cs) => cs.clone(),
            Node::AtLeast(_, _, c) => vec![*c],
        }
    }

    /// All term ids reachable from `t` (including `t`), children first.
    pub fn reachable(&self, t: TermId) -> Vec<TermId> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut stack = vec![(t, false)];
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                out.push(x);
                continue;
            }
            if !seen.insert(x) {
                continue;
            }
            stack.push((x, true));
            for c in self.children(x).into_iter().rev() {
                if !seen.contains(&c) {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    pub fn dag_size(&self, t: TermId) -> usize {
        self.reachable(t).len()
    }

    /// Size of the tree unfolding (number of nodes counted with multiplicity).
    pub fn tree_size(&self, t: TermId) -> u64 {
        let mut memo: HashMap<TermId, u64> = HashMap::new();
        for x in self.reachable(t) {
            let s = 1 + self
                .children(x)
                .iter()
                .map(|c| memo[c])
                .fold(0u64, |a, b| a.saturating_add(b));
            memo.insert(x, s);
        }
        memo[&t]
    }

    /// True iff every counting restriction below `t` has threshold 1.
    pub fn is_alc(&self, t: TermId) -> bool {
        self.reachable(t)
            .into_iter()
            .all(|x| !matches!(self.node(x), Node::AtLeast(n, _, _) if *n != 1))
    }

    /// Concept and role names occurring in `t`.
    pub fn names_of(&self, t: TermId) -> Vec<Name> {
        let mut out = Vec::new();
        for x in self.reachable(t) {
            match self.node(x) {
                Node::Atom(n) => out.push(*n),
                Node::AtLeast(_, r, _) => out.push(*r),
                _ => {}
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Maximal nesting depth of counting restrictions.
    pub fn role_depth(&self, t: TermId) -> usize {
        let mut memo: HashMap<TermId, usize> = HashMap::new();
        for x in self.reachable(t) {
            let below = self.children(x).iter().map(|c| memo[c]).max().unwrap_or(0);
            let d = match self.node(x) {
                Node::AtLeast(..) => below + 1,
                _ => below,
            };
            memo.insert(x, d);
        }
        memo[&t]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_negation_collapses() {
        let mut s = TermStore::new();
        let a = s.atom("A");
        let na = s.not(a);
        assert_eq!(s.not(na), a);
        assert_eq!(s.lit(na), Lit::neg(a));
    }

    #[test]
    fn conjunction_is_canonical() {
        let mut s = TermStore::new();
        let a = s.atom("A");
        let b = s.atom("B");
        let c = s.atom("C");
        let ab = s.and([b, a]);
        let abc1 = s.and([ab, c, a]);
        let bc = s.and([c, b]);
        let abc2 = s.and([a, bc]);
        assert_eq!(abc1, abc2);
        match s.node(abc1) {
            Node::And(cs) => assert_eq!(cs.len(), 3),
            n => panic!("{n:?}"),
        }
        let top = s.top();
        assert_eq!(s.and([a, top]), a);
        assert_eq!(s.and(Vec::<TermId>::new()), top);
        let bot = s.bot();
        assert_eq!(s.and([a, bot]), bot);
    }

    #[test]
    fn zero_threshold_is_top() {
        let mut s = TermStore::new();
        let r = s.name("r");
        let a = s.atom("A");
        assert_eq!(s.at_least(0, r, a), s.top());
    }

    #[test]
    fn dag_size_counts_distinct_nodes() {
        let mut s = TermStore::new();
        assert_eq!(s.dag_size(s.top()), 1);
        let a = s.atom("A");
        let na = s.not(a);
        let conj = s.and([a, na]);
        assert_eq!(s.dag_size(conj), 3);
        let r = s.name("r");
        let ex = s.exists(r, conj);
        let shared = s.and([ex, conj]);
        assert!((s.dag_size(shared) as u64) < s.tree_size(shared));
    }

    #[test]
    fn alc_flag() {
        let mut s = TermStore::new();
        let r = s.name("r");
        let top = s.top();
        let e = s.exists(r, top);
        let two = s.at_least(2, r, top);
        assert!(s.is_alc(e));
        assert!(!s.is_alc(two));
        let at_most_zero = s.at_most(0, r, top);
        assert!(s.is_alc(at_most_zero));
    }
}
