//! ALCH separators for every eliminated mosaic, built on demand by
//! memoized recursion over the elimination trace.

use super::completion::{atomic_sep, complete, SepSource, Strategy};
use super::TypeSep;
use crate::error::{Error, Result};
use crate::mosaics::{DeadIndex, Decision, Reason, Record};
use crate::syntax::{TermId, TermStore};
use std::collections::HashMap;

pub struct AlchSeparators<'a> {
    d: &'a Decision,
    store: &'a mut TermStore,
    strategy: Strategy,
    memo: HashMap<usize, TypeSep>,
}

impl SepSource for AlchSeparators<'_> {
    fn store(&mut self) -> &mut TermStore {
        self.store
    }

    fn reason_sep(&mut self, r: &Reason) -> Result<TypeSep> {
        match *r {
            Reason::Atomic {
                with,
                without,
                atom,
            } => Ok(atomic_sep(self.store, with, without, atom)),
            Reason::Eliminated(id) => self.mosaic(id),
        }
    }
}

impl<'a> AlchSeparators<'a> {
    pub fn new(d: &'a Decision, store: &'a mut TermStore, strategy: Strategy) -> Self {
        AlchSeparators {
            d,
            store,
            strategy,
            memo: HashMap::new(),
        }
    }

    pub fn store_ref(&self) -> &TermStore {
        self.store
    }

    /// Separator for the eliminated mosaic `id`.
    pub fn mosaic(&mut self, id: usize) -> Result<TypeSep> {
        if let Some(s) = self.memo.get(&id) {
            return Ok(s.clone());
        }
        let d = self.d;
        let u = &d.universe;
        let ctx = &d.ctx;
        let entry = u.eliminated[id]
            .map(|k| &u.trace[k])
            .ok_or_else(|| Error::Invalid(format!("mosaic m{id} was not eliminated")))?;
        let m = &u.mosaics[id];
        let sep = match entry.record {
            Record::BaseAtomic { atom, .. } => super::base_separator(self.store, ctx, m, atom)?,
            Record::StepAlch {
                t, existential, role, ..
            } => {
                if m.len() == 1 {
                    return Err(Error::Soundness(format!(
                        "singleton mosaic m{id} eliminated by an existential step"
                    )));
                }
                let req = ctx
                    .requirements(m)
                    .into_iter()
                    .find(|r| r.t == t && r.existential == existential)
                    .ok_or_else(|| Error::Invalid("trace record without requirement".into()))?;
                let dead = DeadIndex::build(ctx, u, entry.round);
                let entries = complete(self, ctx, u, &dead, &req.members, self.strategy)?;
                let supers = ctx.sigma_supers(role);
                let mut sep = TypeSep::new();
                let mut others = Vec::new();
                for t2 in m.iter().filter(|&x| x != t) {
                    let parts: Vec<TermId> = supers
                        .iter()
                        .map(|&s| {
                            let k = req.members.binary_search(ctx.succ(t2, s)).unwrap();
                            self.store.forall(s, entries[k])
                        })
                        .collect();
                    let c = self.store.and(parts);
                    others.push(c);
                    sep.insert(t2, c);
                }
                let conj = self.store.and(others);
                let c = self.store.not(conj);
                sep.insert(t, c);
                sep
            }
            Record::StepAlcq { .. } => {
                return Err(Error::UnsupportedDialect("ALCQ records need general separators"))
            }
        };
        self.memo.insert(id, sep.clone());
        Ok(sep)
    }

    /// Entries for the root separands `{c0}` and `{n0}` against every
    /// elimination; the `c0` entry is the interpolant.
    pub fn root(&mut self) -> Result<Vec<TermId>> {
        let d = self.d;
        let dead = DeadIndex::build(&d.ctx, &d.universe, usize::MAX);
        let members = d.ctx.root_members();
        complete(self, &d.ctx, &d.universe, &dead, &members, self.strategy)
    }

    /// The separator entry for `{c0}`.
    pub fn interpolant(&mut self) -> Result<TermId> {
        let entries = self.root()?;
        let members = self.d.ctx.root_members();
        let k = members.binary_search(&vec![self.d.ctx.c0]).unwrap();
        Ok(entries[k])
    }
}
