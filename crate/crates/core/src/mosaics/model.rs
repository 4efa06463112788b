//! Witness models for ALCH "consistent" verdicts: elements are pairs of a
//! type and a live mosaic containing it, and elements sharing a mosaic are
//! Σ-bisimilar.

use super::{Context, Decision, Verdict};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::semantics::{BisimRelation, FiniteInterpretation};
use crate::syntax::{Dialect, Name, TermStore};
use std::collections::{BTreeSet, HashMap, VecDeque};

#[derive(Debug, Clone)]
pub struct WitnessModel {
    pub interp: FiniteInterpretation,
    /// `(type, mosaic)` per element.
    pub elements: Vec<(usize, usize)>,
    pub z: BisimRelation,
    /// Elements realizing the two root concepts.
    pub e1: usize,
    pub e2: usize,
}

/// `T ⤳_s T'`: every type of `T` has an `s`-successor candidate in `T'`.
fn leads(ctx: &Context, a: &Bits, b: &Bits, s: Name) -> bool {
    a.iter().all(|t| {
        let succ = ctx.succ(t, s);
        b.iter().any(|u| succ.iter().all(|l| l.holds_in(&ctx.types[u])))
    })
}

/// Live mosaics reachable from the root through requirement witnesses.
fn reachable(d: &Decision, root: usize) -> Vec<usize> {
    let ctx = &d.ctx;
    let u = &d.universe;
    let alive: Vec<usize> = u.alive();
    let mut seen = BTreeSet::from([root]);
    let mut queue = VecDeque::from([root]);
    let mut order = Vec::new();
    while let Some(id) = queue.pop_front() {
        order.push(id);
        for (k, req) in ctx.requirements(&u.mosaics[id]).iter().enumerate() {
            let w = d.witnesses.get(&(id, k)).copied().or_else(|| {
                alive.iter().copied().find(|&w| {
                    req.members.iter().all(|mem| {
                        u.mosaics[w]
                            .iter()
                            .any(|t| mem.iter().all(|l| l.holds_in(&ctx.types[t])))
                    })
                })
            });
            let w = w.expect("live mosaics have live witnesses");
            if seen.insert(w) {
                queue.push_back(w);
            }
        }
    }
    order
}

pub fn extract_model(store: &TermStore, d: &Decision) -> Result<WitnessModel> {
    let ctx = &d.ctx;
    if ctx.dialect() != Dialect::Alch {
        return Err(Error::UnsupportedDialect("witness models are built in ALCH mode only"));
    }
    let Verdict::Consistent { mosaic, t1, t2 } = d.verdict else {
        return Err(Error::Invalid("no surviving mosaic to build a model from".into()));
    };
    let u = &d.universe;
    let mosaics = reachable(d, mosaic);
    let mut elements = Vec::new();
    for &m in &mosaics {
        for t in u.mosaics[m].iter() {
            elements.push((t, m));
        }
    }
    let index: HashMap<(usize, usize), usize> =
        elements.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut interp = FiniteInterpretation::new(
        elements
            .iter()
            .map(|&(t, m)| format!("t{t}_m{m}"))
            .collect(),
    );
    for (i, &(t, _)) in elements.iter().enumerate() {
        for (idx, a) in ctx.cx.atoms() {
            if ctx.types[t].contains(idx) {
                interp.add_atom(store.name_str(a), i);
            }
        }
    }
    let mut roles = ctx.cx.roles();
    roles.extend(ctx.o.ri_roles());
    roles.extend(ctx.sigma_roles.iter().copied());
    for &r in &roles {
        let supers = ctx.sigma_supers(r);
        for &ma in &mosaics {
            for &mb in &mosaics {
                let (a, b) = (&u.mosaics[ma], &u.mosaics[mb]);
                if !supers.iter().all(|&s| leads(ctx, a, b, s)) {
                    continue;
                }
                for t in a.iter() {
                    let succ = ctx.succ(t, r);
                    for t2 in b.iter() {
                        if succ.iter().all(|l| l.holds_in(&ctx.types[t2])) {
                            interp.add_edge(store.name_str(r), index[&(t, ma)], index[&(t2, mb)]);
                        }
                    }
                }
            }
        }
    }
    let z = BisimRelation::from_pairs(
        elements.len(),
        elements.iter().enumerate().flat_map(|(i, &(_, m))| {
            elements
                .iter()
                .enumerate()
                .filter(move |(_, &(_, m2))| m2 == m)
                .map(move |(j, _)| (i, j))
        }),
    );
    Ok(WitnessModel {
        interp,
        e1: index[&(t1, mosaic)],
        e2: index[&(t2, mosaic)],
        elements,
        z,
    })
}
