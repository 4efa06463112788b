//! Mosaics (sets of types meant to be realized at mutually Σ-bisimilar
//! elements), bad-mosaic elimination with traces, and witness models.

pub mod alch;
pub mod alcq;
pub mod dead;
pub mod lazy;
pub mod model;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::par::Parallelism;
use crate::reasoner::types::{realizable_types, succ_alch};
use crate::syntax::{
    print_concept, CLit, ClosureIndex, Dialect, Name, Ontology, PrintMode, Shape, Signature,
    TermId, TermStore,
};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write;
use std::sync::{Arc, Mutex};

pub use dead::{DeadIndex, Reason};
pub use model::{extract_model, WitnessModel};

/// A conjunctive set of closure literals.
pub type Separand = Vec<CLit>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Explore only mosaics reachable from the root as minimal completions.
    #[default]
    Lazy,
    /// Start from every nonempty set of types.
    Exhaustive,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub mode: Mode,
    pub max_mosaics: usize,
    pub max_partition_nodes: u64,
    pub max_sat_calls: u64,
    pub parallelism: Parallelism,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            mode: Mode::Lazy,
            max_mosaics: 1 << 16,
            max_partition_nodes: 1 << 22,
            max_sat_calls: 1 << 22,
            parallelism: Parallelism::Parallel,
        }
    }
}

/// One existential requirement of a mosaic: type `t` contains `∃role.C`
/// (closure entry `existential`), and some surviving mosaic has to cover
/// every member of `members`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    pub t: usize,
    pub existential: usize,
    pub role: Name,
    pub members: Vec<Separand>,
    /// Index into `members` of `{C} ∪ succ(t, role)`.
    pub main: usize,
}

/// Everything fixed for one problem: closure, realizable types and Σ.
pub struct Context {
    pub cx: ClosureIndex,
    pub o: Ontology,
    pub types: Vec<Bits>,
    type_index: HashMap<Bits, usize>,
    /// Σ-atoms present in the closure, with their closure index.
    pub sigma_atoms: Vec<(usize, Name)>,
    pub sigma_roles: Vec<Name>,
    profiles: Vec<Bits>,
    succ: Vec<BTreeMap<Name, Separand>>,
    ext_cache: Mutex<HashMap<Separand, Arc<Vec<usize>>>>,
    pub c0: CLit,
    pub n0: CLit,
}

impl Context {
    pub fn new(
        store: &TermStore,
        o: &Ontology,
        c0: TermId,
        n0: TermId,
        sigma: &Signature,
    ) -> Result<Context> {
        let cx = ClosureIndex::new(store, o, c0, n0);
        let types = realizable_types(store, o, &cx)?;
        let sigma_atoms: Vec<(usize, Name)> = cx
            .atoms()
            .into_iter()
            .filter(|&(_, n)| sigma.contains_name(store, n))
            .collect();
        let mut roles = cx.roles();
        roles.extend(o.ri_roles());
        let sigma_roles: Vec<Name> = roles
            .iter()
            .copied()
            .filter(|&n| sigma.contains_name(store, n))
            .collect();
        let profiles = types
            .iter()
            .map(|t| {
                sigma_atoms
                    .iter()
                    .enumerate()
                    .filter(|(_, (i, _))| t.contains(*i))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        let succ = types
            .iter()
            .map(|t| roles.iter().map(|&r| (r, succ_alch(&cx, o, t, r))).collect())
            .collect();
        let type_index = types.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        Ok(Context {
            c0: cx.clit(store, c0).expect("c0 in closure"),
            n0: cx.clit(store, n0).expect("n0 in closure"),
            cx,
            o: o.clone(),
            types,
            type_index,
            sigma_atoms,
            sigma_roles,
            profiles,
            succ,
            ext_cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn dialect(&self) -> Dialect {
        self.o.dialect()
    }

    pub fn type_id(&self, t: &Bits) -> Option<usize> {
        self.type_index.get(t).copied()
    }

    /// Σ-atom profile of a type (bit `k` for `sigma_atoms[k]`).
    pub fn profile(&self, t: usize) -> &Bits {
        &self.profiles[t]
    }

    /// The first Σ-atom on which two types disagree.
    pub fn atom_split(&self, a: usize, b: usize) -> Option<Name> {
        self.sigma_atoms
            .iter()
            .find(|(i, _)| self.types[a].contains(*i) != self.types[b].contains(*i))
            .map(|&(_, n)| n)
    }

    pub fn succ(&self, t: usize, r: Name) -> &Separand {
        &self.succ[t][&r]
    }

    /// Σ-roles `s` with `r ⊑ s`.
    pub fn sigma_supers(&self, r: Name) -> Vec<Name> {
        self.sigma_roles
            .iter()
            .copied()
            .filter(|&s| self.o.subsumes(r, s))
            .collect()
    }

    /// Realizable types containing every literal of `m`.
    pub fn extensions(&self, m: &[CLit]) -> Arc<Vec<usize>> {
        if let Some(v) = self.ext_cache.lock().unwrap().get(m) {
            return v.clone();
        }
        let v: Arc<Vec<usize>> = Arc::new(
            (0..self.types.len())
                .filter(|&i| m.iter().all(|l| l.holds_in(&self.types[i])))
                .collect(),
        );
        self.ext_cache
            .lock()
            .unwrap()
            .insert(m.to_vec(), v.clone());
        v
    }

    /// First Σ-atom disagreement inside a mosaic, as `(t with A, t without A, A)`.
    pub fn atomic_violation(&self, m: &Bits) -> Option<(usize, usize, Name)> {
        let first = m.first()?;
        for u in m.iter() {
            if self.profiles[u] != self.profiles[first] {
                let a = self.atom_split(first, u).expect("profiles differ");
                let idx = self.sigma_atoms.iter().find(|x| x.1 == a).unwrap().0;
                return Some(if self.types[first].contains(idx) {
                    (first, u, a)
                } else {
                    (u, first, a)
                });
            }
        }
        None
    }

    /// Existential requirements of a mosaic, in type order then closure order.
    pub fn requirements(&self, m: &Bits) -> Vec<Requirement> {
        let mut out = Vec::new();
        for t in m.iter() {
            for i in self.types[t].iter() {
                let Shape::AtLeast { role, child, .. } = self.cx.shape(i) else {
                    continue;
                };
                let supers = self.sigma_supers(*role);
                let mut main: Separand = self.succ(t, *role).clone();
                main.push(*child);
                main.sort();
                main.dedup();
                let mut members = vec![main.clone()];
                for u in m.iter() {
                    for &s in &supers {
                        members.push(self.succ(u, s).clone());
                    }
                }
                members.sort();
                members.dedup();
                let main = members.binary_search(&main).unwrap();
                out.push(Requirement {
                    t,
                    existential: i,
                    role: *role,
                    members,
                    main,
                });
            }
        }
        out
    }

    /// Root goal: one completion of `c0` and one of `n0` in a common mosaic.
    pub fn root_members(&self) -> Vec<Separand> {
        let mut v = vec![vec![self.c0], vec![self.n0]];
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Record {
    BaseAtomic {
        mosaic: usize,
        atom: Name,
    },
    StepAlch {
        mosaic: usize,
        t: usize,
        existential: usize,
        role: Name,
    },
    StepAlcq {
        mosaic: usize,
        role: Name,
    },
}

impl Record {
    pub fn mosaic(&self) -> usize {
        match self {
            Record::BaseAtomic { mosaic, .. }
            | Record::StepAlch { mosaic, .. }
            | Record::StepAlcq { mosaic, .. } => *mosaic,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub round: usize,
    pub record: Record,
}

#[derive(Debug, Clone, Default)]
pub struct Universe {
    pub mosaics: Vec<Bits>,
    index: HashMap<Bits, usize>,
    /// Trace position of the elimination, if eliminated.
    pub eliminated: Vec<Option<usize>>,
    pub trace: Vec<TraceEntry>,
    pub rounds: usize,
}

impl Universe {
    pub fn new() -> Self {
        Self::default()
    }

    /// All nonempty subsets of `n` types.
    pub fn full(n: usize, cap: usize) -> Result<Universe> {
        if n == 0 {
            return Err(Error::Invalid("no realizable types".into()));
        }
        if n >= 63 || (1usize << n) - 1 > cap {
            return Err(Error::Budget(format!(
                "{n} types give 2^{n}-1 mosaics, above the cap of {cap}"
            )));
        }
        let mut u = Universe::new();
        for code in 1u64..(1u64 << n) {
            u.intern((0..n).filter(|&i| code >> i & 1 == 1).collect());
        }
        Ok(u)
    }

    pub fn len(&self) -> usize {
        self.mosaics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mosaics.is_empty()
    }

    pub fn id(&self, m: &Bits) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn intern(&mut self, m: Bits) -> (usize, bool) {
        if let Some(&id) = self.index.get(&m) {
            return (id, false);
        }
        let id = self.mosaics.len();
        self.index.insert(m.clone(), id);
        self.mosaics.push(m);
        self.eliminated.push(None);
        (id, true)
    }

    pub fn is_alive(&self, id: usize) -> bool {
        self.eliminated[id].is_none()
    }

    pub fn alive(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_alive(i)).collect()
    }

    pub fn eliminated_count(&self) -> usize {
        self.trace.len()
    }

    pub fn round_of(&self, id: usize) -> Option<usize> {
        self.eliminated[id].map(|k| self.trace[k].round)
    }

    pub fn eliminate(&mut self, round: usize, record: Record) {
        let id = record.mosaic();
        debug_assert!(self.eliminated[id].is_none());
        self.eliminated[id] = Some(self.trace.len());
        self.trace.push(TraceEntry { round, record });
    }

    /// One line per trace record.
    pub fn format_trace(&self, store: &TermStore, ctx: &Context) -> String {
        let mut out = String::new();
        let ms = |id: usize| {
            let v: Vec<String> = self.mosaics[id].iter().map(|t| format!("t{t}")).collect();
            format!("m{id}{{{}}}", v.join(","))
        };
        for e in &self.trace {
            let _ = match &e.record {
                Record::BaseAtomic { mosaic, atom } => writeln!(
                    out,
                    "round {} base-atomic {} {}",
                    e.round,
                    ms(*mosaic),
                    store.name_str(*atom)
                ),
                Record::StepAlch {
                    mosaic,
                    t,
                    existential,
                    role,
                } => writeln!(
                    out,
                    "round {} step-alch {} t{} {} {}",
                    e.round,
                    ms(*mosaic),
                    t,
                    print_concept(store, ctx.cx.term(*existential), PrintMode::Tree),
                    store.name_str(*role)
                ),
                Record::StepAlcq { mosaic, role } => writeln!(
                    out,
                    "round {} step-alcq {} {}",
                    e.round,
                    ms(*mosaic),
                    store.name_str(*role)
                ),
            };
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// A surviving mosaic holding a completion of each root concept.
    Consistent { mosaic: usize, t1: usize, t2: usize },
    Inconsistent,
}

pub struct Decision {
    pub ctx: Context,
    pub universe: Universe,
    pub verdict: Verdict,
    /// Lazy mode only: witness mosaic per (mosaic, requirement index).
    pub witnesses: HashMap<(usize, usize), usize>,
}

impl Decision {
    pub fn is_consistent(&self) -> bool {
        matches!(self.verdict, Verdict::Consistent { .. })
    }
}

/// Decides whether `c0` and `n0` are jointly consistent up to
/// Σ-bisimulation under `o`.
pub fn decide_joint_consistency(
    store: &TermStore,
    o: &Ontology,
    c0: TermId,
    n0: TermId,
    sigma: &Signature,
    cfg: &Config,
) -> Result<Decision> {
    let ctx = Context::new(store, o, c0, n0, sigma)?;
    match (o.dialect(), cfg.mode) {
        (Dialect::Alch, Mode::Lazy) => lazy::run(ctx, cfg),
        (Dialect::Alch, Mode::Exhaustive) => alch::run(ctx, cfg),
        (Dialect::Alcq, _) => alcq::run(ctx, cfg),
    }
}

/// Root verdict over a universe whose alive set is downward closed.
pub(crate) fn root_verdict(ctx: &Context, u: &Universe) -> Verdict {
    for &t1 in ctx.extensions(&[ctx.c0]).iter() {
        for &t2 in ctx.extensions(&[ctx.n0]).iter() {
            let m = Bits::from_indices([t1, t2]);
            if let Some(id) = u.id(&m) {
                if u.is_alive(id) {
                    return Verdict::Consistent { mosaic: id, t1, t2 };
                }
            }
        }
    }
    Verdict::Inconsistent
}
