//! General ALCQ separators, evolved along the elimination trace.
//!
//! `Sep_0` conjoins the atomic separators of all atomically inconsistent
//! mosaics. Each existential step for mosaic `T` and role `r` describes
//! the successors of each type by the sign vectors `V⁺` over the current
//! entries: `δ_r(t)` is the disjunction of `∇_r(B)` over all `B ⊆ V⁺`
//! with `t ⊓ ∇_r(B)` satisfiable, where `∇_r(B) = ⊓_{C∈B} ∃r.C ⊓ ∀r.⊔B`.
//! The empty `B` gives `∀r.⊥`, needed for types without `r`-successors.
//!
//! Mosaics eliminated in the same round were all bad against the same
//! live set, so they share the separator from before the round, and with
//! it `V⁺` and every `δ_r(t)`.

use super::{base_separator, type_lits, TypeSep};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::mosaics::{Context, Decision, Record};
use crate::reasoner::Reasoner;
use crate::syntax::{Lit, Name, TermId, TermStore};
use std::collections::HashMap;

/// Subsets of `V⁺` tried per type and step.
pub const MAX_SUBSETS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralSeparator {
    /// Entry per type id; `top` by default.
    pub entries: Vec<TermId>,
}

impl GeneralSeparator {
    pub fn top(store: &TermStore, types: usize) -> Self {
        GeneralSeparator {
            entries: vec![store.top(); types],
        }
    }

    pub fn restrict(&self, m: &Bits) -> TypeSep {
        m.iter().map(|t| (t, self.entries[t])).collect()
    }

    /// `Sep_{n+1}(t) = Sep(t) ⊓ Sep_n(t)` on the types of `sep`.
    pub fn conjoin(&mut self, store: &mut TermStore, sep: &TypeSep) {
        for (&t, &c) in sep {
            self.entries[t] = store.and([c, self.entries[t]]);
        }
    }
}

/// `Sep_0` from the atomically inconsistent mosaics of the trace.
pub fn general_separator_base(store: &mut TermStore, d: &Decision) -> Result<GeneralSeparator> {
    let mut sep = GeneralSeparator::top(store, d.ctx.types.len());
    for e in &d.universe.trace {
        if let Record::BaseAtomic { mosaic, atom } = e.record {
            let s = base_separator(store, &d.ctx, &d.universe.mosaics[mosaic], atom)?;
            sep.conjoin(store, &s);
        }
    }
    Ok(sep)
}

/// Satisfiable sign vectors over the distinct non-`top` entries, as concepts.
pub fn effective_v_plus(store: &mut TermStore, r: &Reasoner, sep: &GeneralSeparator) -> Vec<TermId> {
    let top = store.top();
    let mut k: Vec<TermId> = sep.entries.iter().copied().filter(|&c| c != top).collect();
    k.sort_unstable();
    k.dedup();
    let mut out = Vec::new();
    let mut chosen: Vec<Lit> = Vec::new();
    fn rec(
        store: &mut TermStore,
        r: &Reasoner,
        k: &[TermId],
        chosen: &mut Vec<Lit>,
        out: &mut Vec<TermId>,
    ) {
        if !r.sat_lits(store, chosen) {
            return;
        }
        if chosen.len() == k.len() {
            let terms: Vec<TermId> = chosen.iter().map(|&l| store.term_of(l)).collect();
            out.push(store.and(terms));
            return;
        }
        let l = store.lit(k[chosen.len()]);
        for lit in [l, l.negate()] {
            chosen.push(lit);
            rec(store, r, k, chosen, out);
            chosen.pop();
        }
    }
    rec(store, r, &k, &mut chosen, &mut out);
    out
}

pub fn nabla(store: &mut TermStore, role: Name, b: &[TermId]) -> TermId {
    let mut parts: Vec<TermId> = b.iter().map(|&c| store.exists(role, c)).collect();
    let disj = store.or(b.iter().copied());
    parts.push(store.forall(role, disj));
    store.and(parts)
}

/// `δ_r(t)` for a type given as literals. Subsets are tried in increasing
/// size and only over classes `C` with `t ⊓ ∃r.C` satisfiable.
pub fn delta(
    store: &mut TermStore,
    r: &Reasoner,
    t: &[Lit],
    role: Name,
    v_plus: &[TermId],
) -> Result<TermId> {
    let allowed: Vec<TermId> = v_plus
        .iter()
        .copied()
        .filter(|&c| {
            let ex = store.exists(role, c);
            let mut q = t.to_vec();
            q.push(store.lit(ex));
            r.sat_lits(store, &q)
        })
        .collect();
    let n = allowed.len();
    if n >= 63 || (1u64 << n) > MAX_SUBSETS {
        return Err(Error::Budget(format!(
            "{n} successor classes exceed the subset budget of the counting step"
        )));
    }
    let mut codes: Vec<u64> = (0u64..(1u64 << n)).collect();
    codes.sort_by_key(|c| (c.count_ones(), *c));
    let mut disj = Vec::new();
    for code in codes {
        let b: Vec<TermId> = (0..n)
            .filter(|&i| code >> i & 1 == 1)
            .map(|i| allowed[i])
            .collect();
        let nb = nabla(store, role, &b);
        let mut q = t.to_vec();
        q.push(store.lit(nb));
        if r.sat_lits(store, &q) {
            disj.push(nb);
        }
    }
    Ok(store.or(disj))
}

/// `V⁺` and `δ_r(t)` for one fixed `Sep_n`.
pub struct DeltaCache {
    v_plus: Vec<TermId>,
    memo: HashMap<(usize, Name), TermId>,
}

impl DeltaCache {
    pub fn new(store: &mut TermStore, r: &Reasoner, sep_n: &GeneralSeparator) -> Self {
        DeltaCache {
            v_plus: effective_v_plus(store, r, sep_n),
            memo: HashMap::new(),
        }
    }

    pub fn v_plus(&self) -> &[TermId] {
        &self.v_plus
    }

    pub fn delta(
        &mut self,
        store: &mut TermStore,
        r: &Reasoner,
        ctx: &Context,
        t: usize,
        role: Name,
    ) -> Result<TermId> {
        if let Some(&c) = self.memo.get(&(t, role)) {
            return Ok(c);
        }
        let c = delta(store, r, &type_lits(ctx, t), role, &self.v_plus)?;
        self.memo.insert((t, role), c);
        Ok(c)
    }
}

/// Separator for mosaic `m` eliminated by the counting step on `role`,
/// relative to the `Sep_n` the cache was built from. `t0` is the least type.
pub fn step_separator_alcq(
    store: &mut TermStore,
    r: &Reasoner,
    ctx: &Context,
    m: &Bits,
    role: Name,
    cache: &mut DeltaCache,
) -> Result<TypeSep> {
    let types: Vec<usize> = m.iter().collect();
    let mut sep = TypeSep::new();
    let mut deltas = Vec::new();
    for &t in &types[1..] {
        let c = cache.delta(store, r, ctx, t, role)?;
        deltas.push(c);
        sep.insert(t, c);
    }
    let conj = store.and(deltas);
    sep.insert(types[0], store.not(conj));
    Ok(sep)
}

/// Runs the whole trace round by round, checking the satisfiability-call budget.
pub fn general_separator(
    store: &mut TermStore,
    r: &Reasoner,
    d: &Decision,
    max_sat_calls: u64,
) -> Result<GeneralSeparator> {
    let ctx = &d.ctx;
    let u = &d.universe;
    let mut sep = GeneralSeparator::top(store, ctx.types.len());
    let mut i = 0;
    while i < u.trace.len() {
        let round = u.trace[i].round;
        let prev = sep.clone();
        let mut cache = None;
        while i < u.trace.len() && u.trace[i].round == round {
            let s = match u.trace[i].record {
                Record::BaseAtomic { mosaic, atom } => {
                    base_separator(store, ctx, &u.mosaics[mosaic], atom)?
                }
                Record::StepAlcq { mosaic, role } => {
                    let cache = cache.get_or_insert_with(|| DeltaCache::new(store, r, &prev));
                    step_separator_alcq(store, r, ctx, &u.mosaics[mosaic], role, cache)?
                }
                Record::StepAlch { .. } => {
                    return Err(Error::UnsupportedDialect("ALCH records need completion separators"))
                }
            };
            sep.conjoin(store, &s);
            if r.sat_calls() > max_sat_calls {
                return Err(Error::Budget(format!(
                    "more than {max_sat_calls} satisfiability checks while building separators"
                )));
            }
            i += 1;
        }
    }
    Ok(sep)
}

/// `⊔_{t ∋ c0} Sep(t)`.
pub fn interpolant(store: &mut TermStore, d: &Decision, sep: &GeneralSeparator) -> TermId {
    let ts = d.ctx.extensions(&[d.ctx.c0]);
    let parts: Vec<TermId> = ts.iter().map(|&t| sep.entries[t]).collect();
    store.or(parts)
}
