//! Exhaustive ALCH elimination over every nonempty set of types.

use super::{root_verdict, Config, Context, Decision, Record, Universe};
use crate::bits::Bits;
use crate::error::Result;
use crate::par;
use std::collections::HashMap;

/// Badness of `u.mosaics[id]` against the live mosaics `alive`.
pub fn is_bad_alch(ctx: &Context, u: &Universe, alive: &[&Bits], id: usize) -> Option<Record> {
    let m = &u.mosaics[id];
    if let Some((_, _, atom)) = ctx.atomic_violation(m) {
        return Some(Record::BaseAtomic { mosaic: id, atom });
    }
    for req in ctx.requirements(m) {
        let witnessed = alive.iter().any(|w| {
            req.members
                .iter()
                .all(|mem| w.iter().any(|t| mem.iter().all(|l| l.holds_in(&ctx.types[t]))))
        });
        if !witnessed {
            return Some(Record::StepAlch {
                mosaic: id,
                t: req.t,
                existential: req.existential,
                role: req.role,
            });
        }
    }
    None
}

/// Round-based elimination: each round judges every live mosaic against
/// the round-start snapshot, then commits all bad ones.
pub fn eliminate(ctx: &Context, u: &mut Universe, cfg: &Config) {
    let mut round = u.rounds + 1;
    loop {
        let alive = u.alive();
        let refs: Vec<&Bits> = alive.iter().map(|&i| &u.mosaics[i]).collect();
        let bad = par::map(cfg.parallelism, &alive, |&id| is_bad_alch(ctx, u, &refs, id));
        let bad: Vec<Record> = bad.into_iter().flatten().collect();
        if bad.is_empty() {
            return;
        }
        for rec in bad {
            u.eliminate(round, rec);
        }
        u.rounds = round;
        round += 1;
    }
}

/// One-at-a-time elimination in a fixed scan order; each elimination is a
/// round of its own. Used to check order independence of the fixpoint.
pub fn eliminate_in_order(ctx: &Context, u: &mut Universe, order: &[usize]) {
    let mut round = u.rounds + 1;
    loop {
        let mut changed = false;
        for &id in order {
            if !u.is_alive(id) {
                continue;
            }
            let alive = u.alive();
            let refs: Vec<&Bits> = alive.iter().map(|&i| &u.mosaics[i]).collect();
            if let Some(rec) = is_bad_alch(ctx, u, &refs, id) {
                u.eliminate(round, rec);
                u.rounds = round;
                round += 1;
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

/// Re-runs every recorded check against the live set at its round start.
pub fn replay_trace(ctx: &Context, u: &Universe) -> bool {
    u.trace.iter().all(|e| {
        let alive: Vec<&Bits> = (0..u.len())
            .filter(|&i| u.round_of(i).is_none_or(|r| r >= e.round))
            .map(|i| &u.mosaics[i])
            .collect();
        is_bad_alch(ctx, u, &alive, e.record.mosaic()).as_ref() == Some(&e.record)
    })
}

pub fn run(ctx: Context, cfg: &Config) -> Result<Decision> {
    let mut u = Universe::full(ctx.types.len(), cfg.max_mosaics)?;
    eliminate(&ctx, &mut u, cfg);
    let verdict = root_verdict(&ctx, &u);
    Ok(Decision {
        ctx,
        universe: u,
        verdict,
        witnesses: HashMap::new(),
    })
}
