use super::term::{Name, TermId};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dialect {
    Alch,
    Alcq,
}

impl std::str::FromStr for Dialect {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alch" => Ok(Dialect::Alch),
            "alcq" => Ok(Dialect::Alcq),
            _ => Err(Error::Invalid(format!("unknown dialect {s:?}"))),
        }
    }
}

/// Concept inclusions plus, in ALCH mode, role inclusions with their
/// reflexive-transitive closure computed eagerly.
#[derive(Debug, Clone)]
pub struct Ontology {
    dialect: Dialect,
    cis: Vec<(TermId, TermId)>,
    ris: Vec<(Name, Name)>,
    /// Strict part of the role order; reflexive pairs are implicit.
    above: BTreeMap<Name, BTreeSet<Name>>,
}

impl Ontology {
    pub fn new(dialect: Dialect, cis: Vec<(TermId, TermId)>, ris: Vec<(Name, Name)>) -> Self {
        let mut direct: BTreeMap<Name, Vec<Name>> = BTreeMap::new();
        for &(r, s) in &ris {
            direct.entry(r).or_default().push(s);
        }
        let mut above = BTreeMap::new();
        for &r in direct.keys() {
            let mut seen = BTreeSet::new();
            let mut stack = vec![r];
            while let Some(x) = stack.pop() {
                for &y in direct.get(&x).into_iter().flatten() {
                    if seen.insert(y) {
                        stack.push(y);
                    }
                }
            }
            seen.remove(&r);
            above.insert(r, seen);
        }
        Ontology {
            dialect,
            cis,
            ris,
            above,
        }
    }

    pub fn empty(dialect: Dialect) -> Self {
        Ontology::new(dialect, Vec::new(), Vec::new())
    }

    pub fn dialect(&self) -> Dialect {
        self.dialect
    }

    pub fn cis(&self) -> &[(TermId, TermId)] {
        &self.cis
    }

    pub fn ris(&self) -> &[(Name, Name)] {
        &self.ris
    }

    /// `O |= r ⊑ s`.
    pub fn role_subsumes(&self, r: Name, s: Name) -> Result<bool> {
        if self.dialect != Dialect::Alch {
            return Err(Error::UnsupportedDialect("ALCH mode"));
        }
        Ok(self.subsumes(r, s))
    }

    /// Dialect-agnostic variant: without role inclusions only `r ⊑ r` holds.
    pub fn subsumes(&self, r: Name, s: Name) -> bool {
        r == s || self.above.get(&r).is_some_and(|a| a.contains(&s))
    }

    /// All `s` with `O |= r ⊑ s`, including `r` itself, in ascending order.
    pub fn supers(&self, r: Name) -> Vec<Name> {
        let mut v: Vec<Name> = self.above.get(&r).into_iter().flatten().copied().collect();
        v.push(r);
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Role names mentioned in role inclusions.
    pub fn ri_roles(&self) -> BTreeSet<Name> {
        self.ris.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}
