//! Concept and ontology representation: hash-consed terms, parsing,
//! printing, signatures, subconcept closure and the role hierarchy.

pub mod closure;
pub mod ontology;
pub mod parse;
pub mod print;
pub mod signature;
pub mod term;

pub use closure::{CLit, ClosureIndex, Shape};
pub use ontology::{Dialect, Ontology};
pub use parse::{
    parse_concept, parse_concept_any, parse_concept_dag, parse_model, parse_ontology,
    parse_signature,
};
pub use print::{print_concept, PrintMode};
pub use signature::Signature;
pub use term::{Lit, Name, Node, TermId, TermStore};
