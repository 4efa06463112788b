//! Lifting separators from completed mosaics to sets of separands.
//!
//! Given separands `D` none of whose completions survives, both strategies
//! build an entry for each member such that every member implies its entry
//! and the entries are jointly unsatisfiable.
//!
//! `Product` is the closed formula: the disjunction over completions `t` of
//! a member of the conjunction over all choice functions `f` with `f(C) = t`
//! of the separator for the image of `f`. `Sequential` assigns members one
//! at a time along a search tree and stops at the first dead partial image;
//! a branch node on member `C` takes the disjunction of the children's
//! entries for their chosen type and the conjunction of the children's
//! entries for everything else. The tree is usually far smaller than the
//! set of all choice functions.

use super::TypeSep;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::mosaics::{Context, DeadIndex, Reason, Separand, Universe};
use crate::syntax::{TermId, TermStore};
use std::collections::{BTreeMap, HashMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// `Product` when there are at most [`PRODUCT_LIMIT`] choice functions.
    #[default]
    Auto,
    Product,
    Sequential,
}

pub const PRODUCT_LIMIT: u128 = 1024;

pub trait SepSource {
    fn store(&mut self) -> &mut TermStore;
    /// Separator for a dead set of types, keyed by type.
    fn reason_sep(&mut self, r: &Reason) -> Result<TypeSep>;
}

/// Separator for an atomic disagreement.
pub fn atomic_sep(store: &mut TermStore, with: usize, without: usize, atom: crate::syntax::Name) -> TypeSep {
    let a = store.atom_named(atom);
    let na = store.not(a);
    TypeSep::from([(with, a), (without, na)])
}

/// Entries for `members`, one per member, in order.
pub fn complete<S: SepSource>(
    src: &mut S,
    ctx: &Context,
    u: &Universe,
    dead: &DeadIndex,
    members: &[Separand],
    strategy: Strategy,
) -> Result<Vec<TermId>> {
    let exts: Vec<_> = members.iter().map(|m| ctx.extensions(m)).collect();
    let cp = exts
        .iter()
        .try_fold(1u128, |acc, e| acc.checked_mul(e.len() as u128))
        .unwrap_or(u128::MAX);
    let product = match strategy {
        Strategy::Product => true,
        Strategy::Sequential => false,
        Strategy::Auto => cp <= PRODUCT_LIMIT,
    };
    if product {
        product_form(src, ctx, u, dead, members)
    } else {
        let mut seq = Sequential {
            ctx,
            u,
            dead,
            members,
            memo: HashMap::new(),
        };
        assert!(members.len() <= 128, "too many separands");
        let all = if members.len() == 128 {
            u128::MAX
        } else {
            (1u128 << members.len()) - 1
        };
        let node = seq.rec(src, &Bits::new(), all)?;
        let top = src.store().top();
        Ok((0..members.len())
            .map(|m| node.members.get(&m).copied().unwrap_or(top))
            .collect())
    }
}

fn product_form<S: SepSource>(
    src: &mut S,
    ctx: &Context,
    u: &Universe,
    dead: &DeadIndex,
    members: &[Separand],
) -> Result<Vec<TermId>> {
    let exts: Vec<_> = members.iter().map(|m| ctx.extensions(m)).collect();
    let mut acc: Vec<BTreeMap<usize, Vec<TermId>>> = exts
        .iter()
        .map(|e| e.iter().map(|&t| (t, Vec::new())).collect())
        .collect();
    if exts.iter().all(|e| !e.is_empty()) {
        let mut choice = vec![0usize; members.len()];
        loop {
            let image: Bits = choice.iter().zip(&exts).map(|(&i, e)| e[i]).collect();
            let reason = dead.dead_set(ctx, u, &image).ok_or_else(|| {
                Error::Invalid("a completion survives; the separands are jointly consistent".into())
            })?;
            let sep = src.reason_sep(&reason)?;
            for (m, (&i, e)) in choice.iter().zip(&exts).enumerate() {
                let t = e[i];
                if let Some(&c) = sep.get(&t) {
                    acc[m].get_mut(&t).unwrap().push(c);
                }
            }
            let mut k = 0;
            loop {
                if k == choice.len() {
                    break;
                }
                choice[k] += 1;
                if choice[k] < exts[k].len() {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
            if k == choice.len() {
                break;
            }
        }
    }
    let store = src.store();
    Ok(acc
        .into_iter()
        .map(|per_t| {
            let ds: Vec<TermId> = per_t.into_values().map(|cs| store.and(cs)).collect();
            store.or(ds)
        })
        .collect())
}

#[derive(Clone, Default)]
struct Node {
    types: BTreeMap<usize, TermId>,
    members: BTreeMap<usize, TermId>,
}

struct Sequential<'a> {
    ctx: &'a Context,
    u: &'a Universe,
    dead: &'a DeadIndex,
    members: &'a [Separand],
    memo: HashMap<(Bits, u128), Node>,
}

impl Sequential<'_> {
    fn rec<S: SepSource>(&mut self, src: &mut S, p: &Bits, rest: u128) -> Result<Node> {
        if rest == 0 {
            return Err(Error::Invalid(
                "a completion survives; the separands are jointly consistent".into(),
            ));
        }
        if let Some(n) = self.memo.get(&(p.clone(), rest)) {
            return Ok(n.clone());
        }
        let mut best: Option<(usize, usize)> = None;
        for m in (0..self.members.len()).filter(|&m| rest >> m & 1 == 1) {
            let alive = self
                .ctx
                .extensions(&self.members[m])
                .iter()
                .filter(|&&t| self.dead.dead_with(self.ctx, self.u, p, t).is_none())
                .count();
            if best.is_none_or(|(_, a)| alive < a) {
                best = Some((m, alive));
            }
        }
        let b = best.unwrap().0;
        let rest2 = rest & !(1u128 << b);
        let ext = self.ctx.extensions(&self.members[b]);
        let mut disj = Vec::new();
        let mut types: BTreeMap<usize, Vec<TermId>> = BTreeMap::new();
        let mut mems: BTreeMap<usize, Vec<TermId>> = BTreeMap::new();
        for &t in ext.iter() {
            let child = match self.dead.dead_with(self.ctx, self.u, p, t) {
                Some(reason) => Node {
                    types: src.reason_sep(&reason)?,
                    members: BTreeMap::new(),
                },
                None => {
                    let mut q = p.clone();
                    q.insert(t);
                    self.rec(src, &q, rest2)?
                }
            };
            if let Some(&c) = child.types.get(&t) {
                disj.push(c);
            } else {
                disj.push(src.store().top());
            }
            for (&x, &c) in &child.types {
                if p.contains(x) {
                    types.entry(x).or_default().push(c);
                }
            }
            for (&m, &c) in &child.members {
                mems.entry(m).or_default().push(c);
            }
        }
        let store = src.store();
        let mut node = Node::default();
        for (x, cs) in types {
            node.types.insert(x, store.and(cs));
        }
        for (m, cs) in mems {
            node.members.insert(m, store.and(cs));
        }
        node.members.insert(b, store.or(disj));
        self.memo.insert((p.clone(), rest), node.clone());
        Ok(node)
    }
}
