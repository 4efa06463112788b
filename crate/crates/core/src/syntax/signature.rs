use super::term::{Name, TermId, TermStore};
use std::collections::BTreeSet;

/// A set of concept and role names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    names: BTreeSet<String>,
}

impl Signature {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(names: I) -> Self {
        Signature {
            names: names.into_iter().map(Into::into).collect(),
        }
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.contains(name)
    }

    pub fn contains_name(&self, store: &TermStore, n: Name) -> bool {
        self.contains(store.name_str(n))
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.names.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.names.is_subset(&other.names)
    }

    /// True iff every name in `t` belongs to this signature.
    pub fn covers(&self, store: &TermStore, t: TermId) -> bool {
        store
            .names_of(t)
            .into_iter()
            .all(|n| self.contains_name(store, n))
    }

    /// The signature of a concept.
    pub fn of_term(store: &TermStore, t: TermId) -> Signature {
        Signature::new(store.names_of(t).into_iter().map(|n| store.name_str(n).to_string()))
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<&str> = self.iter().collect();
        write!(f, "{}", v.join(" "))
    }
}
