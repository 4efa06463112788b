//! Which partial mosaics are already known to be bad.
//!
//! A set of types is dead if two of its types disagree on a Σ-atom, or if
//! it includes a mosaic eliminated before a given round. Badness is upward
//! closed, so this is exactly the complement of the surviving sets.

use super::{Context, Universe};
use crate::bits::Bits;
use crate::syntax::Name;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// `with` contains `atom`, `without` does not.
    Atomic {
        with: usize,
        without: usize,
        atom: Name,
    },
    /// Includes this eliminated mosaic.
    Eliminated(usize),
}

#[derive(Debug, Clone)]
pub struct DeadIndex {
    /// Per type, eliminated mosaics containing it, in trace order.
    by_type: Vec<Vec<usize>>,
}

fn subset_with(e: &Bits, p: &Bits, u: usize) -> bool {
    e.iter().all(|x| x == u || p.contains(x))
}

impl DeadIndex {
    /// Index of mosaics eliminated in rounds strictly before `before_round`.
    pub fn build(ctx: &Context, u: &Universe, before_round: usize) -> DeadIndex {
        let mut by_type = vec![Vec::new(); ctx.types.len()];
        for e in &u.trace {
            if e.round < before_round {
                let id = e.record.mosaic();
                for t in u.mosaics[id].iter() {
                    by_type[t].push(id);
                }
            }
        }
        DeadIndex { by_type }
    }

    /// Whether `p ∪ {t}` is dead, given that `p` is not.
    pub fn dead_with(&self, ctx: &Context, u: &Universe, p: &Bits, t: usize) -> Option<Reason> {
        if let Some(first) = p.first() {
            if ctx.profile(first) != ctx.profile(t) {
                let atom = ctx.atom_split(first, t).unwrap();
                let idx = ctx.sigma_atoms.iter().find(|x| x.1 == atom).unwrap().0;
                let (with, without) = if ctx.types[t].contains(idx) {
                    (t, first)
                } else {
                    (first, t)
                };
                return Some(Reason::Atomic {
                    with,
                    without,
                    atom,
                });
            }
        }
        if p.contains(t) {
            return None;
        }
        self.by_type[t]
            .iter()
            .find(|&&id| subset_with(&u.mosaics[id], p, t))
            .map(|&id| Reason::Eliminated(id))
    }

    /// Whether `m` is dead; prefers the earliest eliminated subset.
    pub fn dead_set(&self, ctx: &Context, u: &Universe, m: &Bits) -> Option<Reason> {
        if let Some((with, without, atom)) = ctx.atomic_violation(m) {
            return Some(Reason::Atomic {
                with,
                without,
                atom,
            });
        }
        m.iter()
            .filter_map(|t| {
                self.by_type[t]
                    .iter()
                    .find(|&&id| u.mosaics[id].is_subset(m))
                    .copied()
            })
            .min_by_key(|&id| u.eliminated[id])
            .map(Reason::Eliminated)
    }
}
