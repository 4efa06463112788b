//! ALCH elimination over the mosaics reachable from the root goal.
//!
//! Instead of materializing every set of types, the universe grows on
//! demand: for each requirement of a live mosaic we search for a minimal
//! completion of its members that is not dead, and add it if it is new.
//! Every mosaic eliminated here is bad in the full universe as well, and at
//! the fixpoint the live mosaics witness each other's requirements, so the
//! verdict agrees with exhaustive elimination.

use super::{Config, Context, DeadIndex, Decision, Record, Requirement, Separand, Universe, Verdict};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::par;
use crate::syntax::CLit;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

/// Search nodes allowed per cover search.
const SEARCH_BUDGET: usize = 1 << 22;

/// A set of types, not dead, with a type extending each member.
pub fn find_cover(
    ctx: &Context,
    u: &Universe,
    dead: &DeadIndex,
    members: &[Separand],
) -> Result<Option<Bits>> {
    let mut s = Search {
        ctx,
        u,
        dead,
        exts: members.iter().map(|m| ctx.extensions(m)).collect(),
        members,
        failed: HashSet::new(),
        nodes: 0,
    };
    s.rec(&Bits::new())
}

struct Search<'a> {
    ctx: &'a Context,
    u: &'a Universe,
    dead: &'a DeadIndex,
    members: &'a [Separand],
    exts: Vec<Arc<Vec<usize>>>,
    failed: HashSet<Bits>,
    nodes: usize,
}

impl Search<'_> {
    fn covers(&self, t: usize, m: usize) -> bool {
        self.members[m].iter().all(|l| l.holds_in(&self.ctx.types[t]))
    }

    fn rec(&mut self, p: &Bits) -> Result<Option<Bits>> {
        let uncovered: Vec<usize> = (0..self.members.len())
            .filter(|&m| !p.iter().any(|t| self.covers(t, m)))
            .collect();
        if uncovered.is_empty() {
            return Ok(Some(p.clone()));
        }
        if self.failed.contains(p) {
            return Ok(None);
        }
        self.nodes += 1;
        if self.nodes > SEARCH_BUDGET {
            return Err(Error::Budget("mosaic cover search exceeded its node budget".into()));
        }
        let mut best: Option<Vec<usize>> = None;
        for &m in &uncovered {
            let opts: Vec<usize> = self.exts[m]
                .iter()
                .copied()
                .filter(|&t| self.dead.dead_with(self.ctx, self.u, p, t).is_none())
                .collect();
            if best.as_ref().is_none_or(|b| opts.len() < b.len()) {
                let done = opts.is_empty();
                best = Some(opts);
                if done {
                    break;
                }
            }
        }
        let mut opts = best.unwrap_or_default();
        let score = |t: usize| uncovered.iter().filter(|&&m| self.covers(t, m)).count();
        opts.sort_by_key(|&t| (std::cmp::Reverse(score(t)), t));
        for t in opts {
            let mut q = p.clone();
            q.insert(t);
            if let Some(r) = self.rec(&q)? {
                return Ok(Some(r));
            }
        }
        self.failed.insert(p.clone());
        Ok(None)
    }
}

enum Check {
    Bad(Record),
    Good(Vec<(usize, Bits)>),
}

struct Engine<'a> {
    ctx: &'a Context,
    cfg: &'a Config,
    u: Universe,
    reqs: Vec<Vec<Requirement>>,
    wit: Vec<Vec<Option<usize>>>,
}

impl Engine<'_> {
    fn intern(&mut self, m: Bits) -> Result<(usize, bool)> {
        let (id, fresh) = self.u.intern(m);
        if fresh {
            if self.u.len() > self.cfg.max_mosaics {
                return Err(Error::Budget(format!(
                    "explored mosaics exceed the cap of {}",
                    self.cfg.max_mosaics
                )));
            }
            let r = self.ctx.requirements(&self.u.mosaics[id]);
            self.wit.push(vec![None; r.len()]);
            self.reqs.push(r);
        }
        Ok((id, fresh))
    }

    fn check(&self, dead: &DeadIndex, id: usize) -> Result<Check> {
        let m = &self.u.mosaics[id];
        if let Some((_, _, atom)) = self.ctx.atomic_violation(m) {
            return Ok(Check::Bad(Record::BaseAtomic { mosaic: id, atom }));
        }
        let mut found = Vec::new();
        for (k, req) in self.reqs[id].iter().enumerate() {
            if let Some(w) = self.wit[id][k] {
                if dead.dead_set(self.ctx, &self.u, &self.u.mosaics[w]).is_none() {
                    continue;
                }
            }
            match find_cover(self.ctx, &self.u, dead, &req.members)? {
                Some(p) => found.push((k, p)),
                None => {
                    return Ok(Check::Bad(Record::StepAlch {
                        mosaic: id,
                        t: req.t,
                        existential: req.existential,
                        role: req.role,
                    }))
                }
            }
        }
        Ok(Check::Good(found))
    }

    fn root(&mut self, dead: &DeadIndex) -> Result<Option<(usize, bool)>> {
        match find_cover(self.ctx, &self.u, dead, &self.ctx.root_members())? {
            Some(p) => Ok(Some(self.intern(p)?)),
            None => Ok(None),
        }
    }
}

pub fn run(ctx: Context, cfg: &Config) -> Result<Decision> {
    let mut e = Engine {
        ctx: &ctx,
        cfg,
        u: Universe::new(),
        reqs: Vec::new(),
        wit: Vec::new(),
    };
    let mut round = 1;
    let mut root = e.root(&DeadIndex::build(&ctx, &e.u, round))?;
    while let Some((root_id, _)) = root {
        let dead = DeadIndex::build(&ctx, &e.u, round);
        let alive = e.u.alive();
        let results = par::map(cfg.parallelism, &alive, |&id| e.check(&dead, id));
        let mut changed = false;
        for (&id, res) in alive.iter().zip(results) {
            match res? {
                Check::Bad(rec) => {
                    e.u.eliminate(round, rec);
                    changed = true;
                }
                Check::Good(found) => {
                    for (k, p) in found {
                        let (w, fresh) = e.intern(p)?;
                        e.wit[id][k] = Some(w);
                        changed |= fresh;
                    }
                }
            }
        }
        e.u.rounds = round;
        round += 1;
        root = e.root(&DeadIndex::build(&ctx, &e.u, round))?;
        if let Some((id, fresh)) = root {
            if !changed && !fresh && id == root_id {
                break;
            }
        }
    }
    let verdict = match root {
        Some((id, _)) => {
            let m = &e.u.mosaics[id];
            let pick = |l: CLit| m.iter().find(|&t| l.holds_in(&ctx.types[t])).unwrap();
            Verdict::Consistent {
                mosaic: id,
                t1: pick(ctx.c0),
                t2: pick(ctx.n0),
            }
        }
        None => Verdict::Inconsistent,
    };
    let mut witnesses = HashMap::new();
    for (id, ws) in e.wit.iter().enumerate() {
        for (k, w) in ws.iter().enumerate() {
            if let Some(w) = w {
                witnesses.insert((id, k), *w);
            }
        }
    }
    let universe = e.u;
    Ok(Decision {
        ctx,
        universe,
        verdict,
        witnesses,
    })
}
