//! Satisfiability and entailment for arbitrary concepts under an ontology.
//!
//! Node labels are sets of [`Lit`]s, so checking never interns new terms
//! and works on concepts far larger than the closure the mosaic procedure
//! runs over. The Boolean structure of a node, including the concept
//! inclusions as clauses `not C or D`, goes to a SAT solver; each model is
//! reduced to the counting literals it needs, whose successors are checked
//! recursively, and failing sets are minimized and blocked. Nodes whose
//! label equals an ancestor's are blocked and assumed satisfiable; results
//! that depend on such an assumption are only cached once the ancestor has
//! been decided.

use super::counting::solve_counts;
use crate::syntax::{Lit, Name, Node, Ontology, TermId, TermStore};
use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use varisat::{ExtendFormula, Lit as SatLit, Solver, Var};

/// No dependency on an open ancestor.
const FREE: usize = usize::MAX;

#[derive(Debug, Clone)]
struct Out {
    sat: bool,
    dep: usize,
    /// For unsatisfiable results: a subset of the input that is already unsatisfiable.
    core: Vec<Lit>,
}

impl Out {
    fn sat(dep: usize) -> Out {
        Out {
            sat: true,
            dep,
            core: Vec::new(),
        }
    }

    fn unsat(core: Vec<Lit>) -> Out {
        Out {
            sat: false,
            dep: FREE,
            core,
        }
    }
}

#[derive(Default)]
struct Shared {
    /// Decided labels; `Some(core)` for unsatisfiable ones.
    memo: HashMap<Vec<Lit>, Option<Vec<Lit>>>,
    /// Sets of counting literals known to be jointly unsatisfiable.
    lemmas: Vec<Vec<Lit>>,
}

pub struct Reasoner {
    ontology: Ontology,
    shared: Mutex<Shared>,
    calls: AtomicU64,
}

impl Reasoner {
    pub fn new(o: &Ontology) -> Self {
        Reasoner {
            ontology: o.clone(),
            shared: Mutex::new(Shared::default()),
            calls: AtomicU64::new(0),
        }
    }

    pub fn ontology(&self) -> &Ontology {
        &self.ontology
    }

    /// Number of top-level satisfiability queries answered so far.
    pub fn sat_calls(&self) -> u64 {
        self.calls.load(Ordering::Relaxed)
    }

    pub fn sat(&self, store: &TermStore, c: TermId) -> bool {
        self.sat_lits(store, &[store.lit(c)])
    }

    /// Satisfiability of the conjunction of `lits`.
    pub fn sat_lits(&self, store: &TermStore, lits: &[Lit]) -> bool {
        self.calls.fetch_add(1, Ordering::Relaxed);
        let mut run = Run {
            store,
            o: &self.ontology,
            shared: &self.shared,
            stack: Vec::new(),
            tbox: self
                .ontology
                .cis()
                .iter()
                .map(|&(l, r)| vec![store.lit(l).negate(), store.lit(r)])
                .collect(),
        };
        run.node(lits.to_vec()).sat
    }

    /// `O |= C ⊑ D`.
    pub fn entails(&self, store: &TermStore, c: TermId, d: TermId) -> bool {
        !self.sat_lits(store, &[store.lit(c), store.lit(d).negate()])
    }

    pub fn equivalent(&self, store: &TermStore, c: TermId, d: TermId) -> bool {
        self.entails(store, c, d) && self.entails(store, d, c)
    }
}

struct Run<'a> {
    store: &'a TermStore,
    o: &'a Ontology,
    shared: &'a Mutex<Shared>,
    stack: Vec<Vec<Lit>>,
    tbox: Vec<Vec<Lit>>,
}

/// Propositional abstraction of one node: every non-negated term below the
/// label (stopping at counting restrictions) gets a variable, and
/// conjunctions are encoded as equivalences.
struct Enc<'s> {
    store: &'s TermStore,
    var: HashMap<TermId, Var>,
    solver: Solver<'static>,
}

impl<'s> Enc<'s> {
    fn new(store: &'s TermStore) -> Self {
        Enc {
            store,
            var: HashMap::new(),
            solver: Solver::new(),
        }
    }

    fn lit(&mut self, l: Lit) -> SatLit {
        let v = self.encode(l.term);
        SatLit::from_var(v, l.pos)
    }

    fn encode(&mut self, root: TermId) -> Var {
        if let Some(&v) = self.var.get(&root) {
            return v;
        }
        let mut stack = vec![(root, false)];
        while let Some((t, expanded)) = stack.pop() {
            if self.var.contains_key(&t) {
                continue;
            }
            match self.store.node(t) {
                Node::And(cs) if !expanded => {
                    stack.push((t, true));
                    for &c in cs {
                        let inner = self.store.lit(c).term;
                        if !self.var.contains_key(&inner) {
                            stack.push((inner, false));
                        }
                    }
                }
                Node::And(cs) => {
                    let v = self.solver.new_var();
                    let kids: Vec<SatLit> = cs
                        .iter()
                        .map(|&c| {
                            let l = self.store.lit(c);
                            SatLit::from_var(self.var[&l.term], l.pos)
                        })
                        .collect();
                    let mut back = vec![v.positive()];
                    for &k in &kids {
                        self.solver.add_clause(&[v.negative(), k]);
                        back.push(!k);
                    }
                    self.solver.add_clause(&back);
                    self.var.insert(t, v);
                }
                Node::Top => {
                    let v = self.solver.new_var();
                    self.solver.add_clause(&[v.positive()]);
                    self.var.insert(t, v);
                }
                Node::Not(x) => unreachable!("negation {x} is not a literal term"),
                Node::Atom(_) | Node::AtLeast(..) => {
                    let v = self.solver.new_var();
                    self.var.insert(t, v);
                }
            }
        }
        self.var[&root]
    }

    fn value(&self, model: &[bool], l: Lit) -> bool {
        model[self.var[&l.term].index()] == l.pos
    }
}

impl Run<'_> {
    fn node(&mut self, mut label: Vec<Lit>) -> Out {
        label.sort_unstable();
        label.dedup();
        if let Some(r) = self.shared.lock().unwrap().memo.get(&label) {
            return match r {
                None => Out::sat(FREE),
                Some(core) => Out::unsat(core.clone()),
            };
        }
        if let Some(i) = self.stack.iter().position(|l| *l == label) {
            return Out::sat(i);
        }
        let depth = self.stack.len();
        self.stack.push(label.clone());
        let out = self.solve(&label);
        self.stack.pop();
        if !out.sat || out.dep >= depth {
            let entry = (!out.sat).then(|| out.core.clone());
            self.shared.lock().unwrap().memo.insert(label, entry);
            return Out { dep: FREE, ..out };
        }
        out
    }

    /// Enumerates propositional models, checking the counting restrictions
    /// each one needs and blocking minimal failing sets.
    fn solve(&mut self, label: &[Lit]) -> Out {
        let mut enc = Enc::new(self.store);
        let mut back: HashMap<SatLit, Lit> = HashMap::new();
        let assumptions: Vec<SatLit> = label
            .iter()
            .map(|&l| {
                let x = enc.lit(l);
                back.insert(x, l);
                x
            })
            .collect();
        for cl in &self.tbox {
            let xs: Vec<SatLit> = cl.iter().map(|&l| enc.lit(l)).collect();
            enc.solver.add_clause(&xs);
        }
        let lemmas: Vec<Vec<Lit>> = {
            let sh = self.shared.lock().unwrap();
            sh.lemmas
                .iter()
                .filter(|lm| lm.iter().all(|l| enc.var.contains_key(&l.term)))
                .cloned()
                .collect()
        };
        for lm in lemmas {
            let block: Vec<SatLit> = lm.iter().map(|&l| !enc.lit(l)).collect();
            enc.solver.add_clause(&block);
        }
        loop {
            enc.solver.assume(&assumptions);
            if !enc.solver.solve().unwrap_or(false) {
                let core = enc
                    .solver
                    .failed_core()
                    .unwrap_or(&[])
                    .iter()
                    .filter_map(|x| back.get(x).copied())
                    .collect();
                return Out::unsat(core);
            }
            let mut model = vec![false; enc.var.len()];
            for x in enc.solver.model().unwrap_or_default() {
                if x.index() < model.len() {
                    model[x.index()] = x.is_positive();
                }
            }
            let modal = self.implicant(&enc, &model, label);
            match self.modal(&modal) {
                Ok(out) => return out,
                Err(core) => {
                    let block: Vec<SatLit> = core.iter().map(|&l| !enc.lit(l)).collect();
                    enc.solver.add_clause(&block);
                    self.shared.lock().unwrap().lemmas.push(core);
                }
            }
        }
    }

    /// Counting literals a model needs to make the label and the ontology
    /// clauses true.
    fn implicant(&self, enc: &Enc, model: &[bool], label: &[Lit]) -> Vec<Lit> {
        let mut needed: HashSet<Lit> = HashSet::new();
        let mut modal = Vec::new();
        let mut todo: Vec<Lit> = label.to_vec();
        let mut clauses: Vec<Vec<Lit>> = self.tbox.clone();
        loop {
            while let Some(l) = todo.pop() {
                if !needed.insert(l) {
                    continue;
                }
                match self.store.node(l.term) {
                    Node::And(cs) if l.pos => todo.extend(cs.iter().map(|&c| self.store.lit(c))),
                    Node::And(cs) => clauses.push(cs.iter().map(|&c| self.store.lit(c).negate()).collect()),
                    Node::AtLeast(..) => modal.push(l),
                    _ => {}
                }
            }
            let Some(cl) = clauses.pop() else {
                break;
            };
            if cl.iter().any(|l| needed.contains(l)) {
                continue;
            }
            let pick = cl
                .iter()
                .copied()
                .filter(|&l| enc.value(model, l))
                .min_by_key(|l| matches!(self.store.node(l.term), Node::AtLeast(..)))
                .expect("model falsifies a clause");
            todo.push(pick);
        }
        modal.sort_unstable();
        modal
    }

    /// Checks the successors every role needs; on failure returns a failing
    /// subset of `lits`.
    fn modal(&mut self, lits: &[Lit]) -> std::result::Result<Out, Vec<Lit>> {
        let mut roles: Vec<Name> = lits
            .iter()
            .filter(|l| l.pos)
            .filter_map(|l| match self.store.node(l.term) {
                Node::AtLeast(_, r, _) => Some(*r),
                _ => None,
            })
            .collect();
        roles.sort_unstable();
        roles.dedup();
        let mut dep = FREE;
        for r in roles {
            let o = self.modal_role(lits, r);
            if !o.sat {
                return Err(o.core);
            }
            dep = dep.min(o.dep);
        }
        Ok(Out::sat(dep))
    }

    fn modal_role(&mut self, lits: &[Lit], r: Name) -> Out {
        let mut reqs = Vec::new();
        let mut counted = Vec::new();
        let mut base: Vec<(Lit, Lit)> = Vec::new();
        let mut relevant = Vec::new();
        for &l in lits {
            if let Node::AtLeast(n, s, c) = self.store.node(l.term) {
                let c = self.store.lit(*c);
                if l.pos {
                    if *s == r {
                        reqs.push((*n, c, l));
                        relevant.push(l);
                    }
                } else if *n == 1 {
                    if self.o.subsumes(r, *s) {
                        base.push((c.negate(), l));
                        relevant.push(l);
                    }
                } else if *s == r {
                    counted.push((*n, c));
                    relevant.push(l);
                }
            }
        }
        if reqs.is_empty() {
            return Out::sat(FREE);
        }
        let succ_base: Vec<Lit> = base.iter().map(|b| b.0).collect();
        if counted.is_empty() && reqs.iter().all(|&(n, _, _)| n == 1) {
            let mut dep = FREE;
            for &(_, c, l) in &reqs {
                let mut label = succ_base.clone();
                label.push(c);
                let o = self.node(label);
                if !o.sat {
                    let mut core = vec![l];
                    for x in o.core.iter().filter(|&&x| x != c) {
                        if let Some(b) = base.iter().find(|b| b.0 == *x) {
                            core.push(b.1);
                        }
                    }
                    core.sort_unstable();
                    core.dedup();
                    return Out::unsat(core);
                }
                dep = dep.min(o.dep);
            }
            return Out::sat(dep);
        }
        let lower: Vec<(u32, Lit)> = reqs.iter().map(|&(n, c, _)| (n, c)).collect();
        let out = self.counting(&succ_base, &lower, &counted);
        if out.sat {
            return out;
        }
        let mut core = relevant;
        let mut i = 0;
        while i < core.len() {
            let mut trial = core.clone();
            trial.remove(i);
            if self.modal_role_plain(&trial) {
                i += 1;
            } else {
                core = trial;
            }
        }
        Out::unsat(core)
    }

    /// Satisfiability of the successors of `lits`, all on one role.
    fn modal_role_plain(&mut self, lits: &[Lit]) -> bool {
        let mut lower = Vec::new();
        let mut upper = Vec::new();
        let mut base = Vec::new();
        for &l in lits {
            if let Node::AtLeast(n, _, c) = self.store.node(l.term) {
                let c = self.store.lit(*c);
                if l.pos {
                    lower.push((*n, c));
                } else if *n == 1 {
                    base.push(c.negate());
                } else {
                    upper.push((*n, c));
                }
            }
        }
        lower.is_empty() || self.counting(&base, &lower, &upper).sat
    }

    /// Successor patterns are enumerated over the counted concepts, keeping
    /// only those not dominated by one already found: a pattern dominates
    /// another if it agrees on concepts bounded both ways, has every
    /// lower-bounded concept the other has and no upper-bounded one the
    /// other lacks.
    fn counting(&mut self, base: &[Lit], lower: &[(u32, Lit)], upper: &[(u32, Lit)]) -> Out {
        let mut q: Vec<Lit> = lower.iter().chain(upper).map(|&(_, c)| c).collect();
        q.sort_unstable();
        q.dedup();
        assert!(q.len() <= 64, "too many counted concepts on one role");
        let in_lower = |c: &Lit| lower.iter().any(|x| x.1 == *c);
        let in_upper = |c: &Lit| upper.iter().any(|x| x.1 == *c);
        q.sort_by_key(|c| !(in_lower(c) && in_upper(c)));
        let mut cls = Classes::default();
        for (i, c) in q.iter().enumerate() {
            match (in_lower(c), in_upper(c)) {
                (true, true) => cls.mixed |= 1 << i,
                (true, false) => cls.lo |= 1 << i,
                _ => cls.up |= 1 << i,
            }
        }
        let qi = |c: Lit| q.iter().position(|x| *x == c).unwrap();
        let lo: Vec<(usize, u32)> = lower.iter().map(|&(n, c)| (qi(c), n)).collect();
        let up: Vec<(usize, u32)> = upper.iter().map(|&(n, c)| (qi(c), n - 1)).collect();
        let mut patterns = Vec::new();
        let mut dep = FREE;
        let mut label = base.to_vec();
        self.patterns(&q, &cls, 0, 0, &mut label, &mut patterns, &mut dep);
        match solve_counts(&patterns, &lo, &up) {
            Some(_) => Out::sat(dep),
            None => Out::unsat(Vec::new()),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn patterns(
        &mut self,
        q: &[Lit],
        cls: &Classes,
        k: usize,
        mask: u64,
        label: &mut Vec<Lit>,
        out: &mut Vec<u64>,
        dep: &mut usize,
    ) {
        if k >= cls.mixed.count_ones() as usize {
            let rest = if k >= 64 { 0 } else { !0u64 << k };
            let best = mask | (cls.lo & rest);
            if out.iter().any(|&p| cls.dominates(p, best)) {
                return;
            }
        }
        let o = self.node(label.clone());
        if !o.sat {
            return;
        }
        *dep = (*dep).min(o.dep);
        if k == q.len() {
            out.push(mask);
            return;
        }
        let order = if cls.up >> k & 1 == 1 {
            [false, true]
        } else {
            [true, false]
        };
        for bit in order {
            label.push(if bit { q[k] } else { q[k].negate() });
            let m = if bit { mask | 1 << k } else { mask };
            self.patterns(q, cls, k + 1, m, label, out, dep);
            label.pop();
        }
    }
}

#[derive(Default)]
struct Classes {
    mixed: u64,
    lo: u64,
    up: u64,
}

impl Classes {
    fn dominates(&self, p: u64, x: u64) -> bool {
        p & self.mixed == x & self.mixed && p & self.lo & x == x & self.lo && p & self.up & !x == 0
    }
}
