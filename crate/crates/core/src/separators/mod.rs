//! Separators for eliminated mosaics and for sets of closure concepts.

pub mod alch;
pub mod alcq;
pub mod completion;

use crate::bits::Bits;
use crate::mosaics::Context;
use crate::reasoner::Reasoner;
use crate::error::{Error, Result};
use crate::syntax::{CLit, Lit, Name, TermId, TermStore};
use std::collections::BTreeMap;

pub use completion::Strategy;

/// Per-type separator entries; absent types read as `top`.
pub type TypeSep = BTreeMap<usize, TermId>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certification {
    Certified,
    /// Entry `index` is not implied by its separand.
    NotImplied { index: usize },
    /// The entries are jointly satisfiable.
    JointlySatisfiable,
}

impl Certification {
    pub fn is_certified(&self) -> bool {
        *self == Certification::Certified
    }
}

/// `A` on the types of `m` containing `atom`, `not A` on the others.
pub fn base_separator(store: &mut TermStore, ctx: &Context, m: &Bits, atom: Name) -> Result<TypeSep> {
    let idx = ctx
        .sigma_atoms
        .iter()
        .find(|x| x.1 == atom)
        .map(|x| x.0)
        .ok_or_else(|| Error::Invalid(format!("{} is not a signature atom", store.name_str(atom))))?;
    let with = m.iter().filter(|&t| ctx.types[t].contains(idx)).count();
    if with == 0 || with == m.len() {
        return Err(Error::Invalid(format!(
            "{} does not split the mosaic",
            store.name_str(atom)
        )));
    }
    let a = store.atom_named(atom);
    let na = store.not(a);
    Ok(m.iter()
        .map(|t| (t, if ctx.types[t].contains(idx) { a } else { na }))
        .collect())
}

/// Literals of a type: every closure entry, positive or negated.
pub fn type_lits(ctx: &Context, t: usize) -> Vec<Lit> {
    let ty: &Bits = &ctx.types[t];
    (1..ctx.cx.len())
        .map(|i| ctx.cx.lit_of(CLit { idx: i, pos: ty.contains(i) }))
        .collect()
}

pub fn separand_lits(ctx: &Context, s: &[CLit]) -> Vec<Lit> {
    s.iter().map(|&c| ctx.cx.lit_of(c)).collect()
}

/// Checks both separator conditions: each separand implies its entry and
/// the entries are jointly unsatisfiable.
pub fn certify(store: &TermStore, r: &Reasoner, entries: &[(Vec<Lit>, TermId)]) -> Certification {
    for (i, (s, e)) in entries.iter().enumerate() {
        let mut q = s.clone();
        q.push(store.lit(*e).negate());
        if r.sat_lits(store, &q) {
            return Certification::NotImplied { index: i };
        }
    }
    let all: Vec<Lit> = entries.iter().map(|(_, e)| store.lit(*e)).collect();
    if r.sat_lits(store, &all) {
        Certification::JointlySatisfiable
    } else {
        Certification::Certified
    }
}

/// Certifies a per-type separator for a mosaic.
pub fn certify_mosaic(
    store: &TermStore,
    r: &Reasoner,
    ctx: &Context,
    m: &Bits,
    sep: &TypeSep,
) -> Certification {
    let top = store.top();
    let entries: Vec<(Vec<Lit>, TermId)> = m
        .iter()
        .map(|t| (type_lits(ctx, t), sep.get(&t).copied().unwrap_or(top)))
        .collect();
    certify(store, r, &entries)
}
