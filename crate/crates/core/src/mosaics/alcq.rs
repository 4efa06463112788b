//! ALCQ elimination: existential saturation via witnessing functions and
//! mosaic partitions.
//!
//! A partition is searched as a list of rows. A row assigns to every type
//! `t` of the mosaic under test a nonempty set `A_t` of types, the
//! `r`-successors of `t` placed in that row; the union of the `A_t` must be
//! a live mosaic. Rows with equal unions stand for one mosaic, and merging
//! them only lowers incidence counts. Given the rows, a witnessing function
//! for `t` exists iff the per-pattern sums, each at least the number of row
//! incidences of that pattern and otherwise unbounded, can meet every
//! threshold of `t`.
//!
//! The search only ever adds one type to one `A_t`, either in an existing
//! row or in a fresh row whose other sets are singletons, and only to give
//! the first member without a feasible witnessing function a new pattern.

use super::{root_verdict, Config, Context, Decision, Record, Universe};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::par;
use crate::reasoner::counting::solve_counts;
use crate::syntax::{Name, Shape};
use std::collections::{HashMap, HashSet};

struct Role {
    /// Per type in the mosaic: lower bounds `(j, n)` and upper bounds `(j, n-1)`.
    lower: Vec<Vec<(usize, u32)>>,
    upper: Vec<Vec<(usize, u32)>>,
    /// Pattern mask of every type.
    pattern: Vec<u64>,
}

enum Status {
    Feasible,
    Dead,
    NeedPattern,
}

type Row = Vec<Bits>;

struct PartitionSearch<'a> {
    members: Vec<usize>,
    role: Role,
    alive: &'a HashSet<&'a Bits>,
    seen: HashSet<Vec<Row>>,
    nodes: u64,
    budget: u64,
}

fn union(row: &Row) -> Bits {
    let mut u = Bits::new();
    for a in row {
        u.union_with(a);
    }
    u
}

impl PartitionSearch<'_> {
    fn status(&self, rows: &[Row], k: usize) -> Status {
        let mut incid: HashMap<u64, u32> = HashMap::new();
        for a in rows {
            for t in a[k].iter() {
                *incid.entry(self.role.pattern[t]).or_default() += 1;
            }
        }
        let current = |j: usize| -> u32 {
            incid
                .iter()
                .filter(|(m, _)| *m >> j & 1 == 1)
                .map(|(_, c)| c)
                .sum()
        };
        let mut upper = Vec::new();
        for &(j, m) in &self.role.upper[k] {
            let c = current(j);
            if c > m {
                return Status::Dead;
            }
            upper.push((j, m - c));
        }
        let lower: Vec<(usize, u32)> = self.role.lower[k]
            .iter()
            .filter_map(|&(j, n)| {
                let c = current(j);
                (c < n).then(|| (j, n - c))
            })
            .collect();
        let mut masks: Vec<u64> = incid.keys().copied().collect();
        masks.sort_unstable();
        if solve_counts(&masks, &lower, &upper).is_some() {
            Status::Feasible
        } else {
            Status::NeedPattern
        }
    }

    fn search(&mut self, rows: Vec<Row>) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(
                "partition search exceeded its node budget".into(),
            ));
        }
        let mut key = rows.clone();
        key.sort();
        if !self.seen.insert(key) {
            return Ok(false);
        }
        let mut need = None;
        for k in 0..self.members.len() {
            match self.status(&rows, k) {
                Status::Dead => return Ok(false),
                Status::NeedPattern if need.is_none() => need = Some(k),
                _ => {}
            }
        }
        let Some(k) = need else {
            return Ok(true);
        };
        let occupied: HashSet<u64> = rows
            .iter()
            .flat_map(|a| a[k].iter().map(|t| self.role.pattern[t]))
            .collect();
        let fresh: Vec<usize> = (0..self.role.pattern.len())
            .filter(|t| !occupied.contains(&self.role.pattern[*t]))
            .collect();
        for j in 0..rows.len() {
            let base = union(&rows[j]);
            for &tp in &fresh {
                let mut u = base.clone();
                u.insert(tp);
                if !self.alive.contains(&u) {
                    continue;
                }
                let mut next = rows.clone();
                next[j][k].insert(tp);
                if self.search(next)? {
                    return Ok(true);
                }
            }
        }
        for &tp in &fresh {
            let single = Bits::from_indices([tp]);
            if !self.alive.contains(&single) {
                continue;
            }
            let mut row = vec![Bits::new(); self.members.len()];
            row[k] = single.clone();
            if self.fresh_row(&rows, k, 0, row, single)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Fills the singleton sets of a fresh row for every member but `k`.
    fn fresh_row(&mut self, rows: &[Row], k: usize, i: usize, row: Row, u: Bits) -> Result<bool> {
        if i == self.members.len() {
            let mut next = rows.to_vec();
            next.push(row);
            return self.search(next);
        }
        if i == k {
            return self.fresh_row(rows, k, i + 1, row, u);
        }
        for tp in 0..self.role.pattern.len() {
            let mut u2 = u.clone();
            u2.insert(tp);
            if !self.alive.contains(&u2) {
                continue;
            }
            let mut r2 = row.clone();
            r2[i] = Bits::from_indices([tp]);
            if self.fresh_row(rows, k, i + 1, r2, u2)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Thresholds are all one: counts never matter, so every existential
/// requirement gets its own row and rows never interact.
fn plain_partition_exists(role: &Role, alive: &HashSet<&Bits>) -> bool {
    let m = role.lower.len();
    let allowed: Vec<Vec<usize>> = (0..m)
        .map(|k| {
            let forbidden = role.upper[k].iter().fold(0u64, |acc, &(j, _)| acc | 1 << j);
            (0..role.pattern.len())
                .filter(|&t| role.pattern[t] & forbidden == 0)
                .collect()
        })
        .collect();
    for k in 0..m {
        for &(j, _) in &role.lower[k] {
            let first: Vec<usize> = allowed[k]
                .iter()
                .copied()
                .filter(|&t| role.pattern[t] >> j & 1 == 1)
                .collect();
            let mut order: Vec<usize> = (0..m).filter(|&i| i != k).collect();
            order.sort_by_key(|&i| allowed[i].len());
            let mut options: Vec<&[usize]> = vec![&first];
            options.extend(order.iter().map(|&i| allowed[i].as_slice()));
            if !cover(&options, 0, Bits::new(), alive, &mut HashSet::new()) {
                return false;
            }
        }
    }
    true
}

fn cover(
    options: &[&[usize]],
    i: usize,
    u: Bits,
    alive: &HashSet<&Bits>,
    failed: &mut HashSet<(usize, Bits)>,
) -> bool {
    if i == options.len() {
        return true;
    }
    if failed.contains(&(i, u.clone())) {
        return false;
    }
    let mut tried_inside = false;
    for &t in options[i] {
        if u.contains(t) {
            if tried_inside {
                continue;
            }
            tried_inside = true;
        }
        let mut u2 = u.clone();
        u2.insert(t);
        if alive.contains(&u2) && cover(options, i + 1, u2, alive, failed) {
            return true;
        }
    }
    failed.insert((i, u));
    false
}

fn role_data(ctx: &Context, m: &[usize], r: Name) -> Role {
    let restr = ctx.cx.restrictions_on(r);
    assert!(restr.len() <= 64, "too many counting restrictions on one role");
    let mut childs = Vec::new();
    let mut lower = vec![Vec::new(); m.len()];
    let mut upper = vec![Vec::new(); m.len()];
    for (j, &i) in restr.iter().enumerate() {
        let Shape::AtLeast { n, child, .. } = ctx.cx.shape(i) else {
            unreachable!()
        };
        childs.push(*child);
        for (k, &t) in m.iter().enumerate() {
            if ctx.types[t].contains(i) {
                lower[k].push((j, *n));
            } else {
                upper[k].push((j, n - 1));
            }
        }
    }
    let pattern = ctx
        .types
        .iter()
        .map(|t| {
            childs
                .iter()
                .enumerate()
                .filter(|(_, c)| c.holds_in(t))
                .fold(0u64, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    Role {
        lower,
        upper,
        pattern,
    }
}

/// Whether witnessing functions and a mosaic partition over `alive` exist
/// for role `r` and the mosaic `m`.
pub fn partition_exists(
    ctx: &Context,
    m: &Bits,
    r: Name,
    alive: &HashSet<&Bits>,
    budget: u64,
) -> Result<bool> {
    let members: Vec<usize> = m.iter().collect();
    let role = role_data(ctx, &members, r);
    if role.upper.iter().flatten().all(|&(_, n)| n == 0)
        && role.lower.iter().flatten().all(|&(_, n)| n == 1)
    {
        return Ok(plain_partition_exists(&role, alive));
    }
    let mut s = PartitionSearch {
        members,
        role,
        alive,
        seen: HashSet::new(),
        nodes: 0,
        budget,
    };
    s.search(Vec::new())
}

pub fn is_bad_alcq(
    ctx: &Context,
    u: &Universe,
    alive: &HashSet<&Bits>,
    id: usize,
    budget: u64,
) -> Result<Option<Record>> {
    let m = &u.mosaics[id];
    if let Some((_, _, atom)) = ctx.atomic_violation(m) {
        return Ok(Some(Record::BaseAtomic { mosaic: id, atom }));
    }
    for &r in &ctx.sigma_roles {
        if ctx.cx.restrictions_on(r).is_empty() {
            continue;
        }
        if !partition_exists(ctx, m, r, alive, budget)? {
            return Ok(Some(Record::StepAlcq { mosaic: id, role: r }));
        }
    }
    Ok(None)
}

pub fn eliminate(ctx: &Context, u: &mut Universe, cfg: &Config) -> Result<()> {
    let mut round = u.rounds + 1;
    loop {
        let alive = u.alive();
        let refs: HashSet<&Bits> = alive.iter().map(|&i| &u.mosaics[i]).collect();
        let bad = par::map(cfg.parallelism, &alive, |&id| {
            is_bad_alcq(ctx, u, &refs, id, cfg.max_partition_nodes)
        });
        let mut found = Vec::new();
        for b in bad {
            if let Some(rec) = b? {
                found.push(rec);
            }
        }
        if found.is_empty() {
            return Ok(());
        }
        for rec in found {
            u.eliminate(round, rec);
        }
        u.rounds = round;
        round += 1;
    }
}

/// Single-mosaic scan order variant of [`eliminate`].
pub fn eliminate_in_order(ctx: &Context, u: &mut Universe, order: &[usize], budget: u64) -> Result<()> {
    let mut round = u.rounds + 1;
    loop {
        let mut changed = false;
        for &id in order {
            if !u.is_alive(id) {
                continue;
            }
            let alive = u.alive();
            let refs: HashSet<&Bits> = alive.iter().map(|&i| &u.mosaics[i]).collect();
            if let Some(rec) = is_bad_alcq(ctx, u, &refs, id, budget)? {
                u.eliminate(round, rec);
                u.rounds = round;
                round += 1;
                changed = true;
            }
        }
        if !changed {
            return Ok(());
        }
    }
}

pub fn run(ctx: Context, cfg: &Config) -> Result<Decision> {
    let mut u = Universe::full(ctx.types.len(), cfg.max_mosaics)?;
    eliminate(&ctx, &mut u, cfg)?;
    let verdict = root_verdict(&ctx, &u);
    Ok(Decision {
        ctx,
        universe: u,
        verdict,
        witnesses: HashMap::new(),
    })
}
