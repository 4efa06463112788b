//! Type-based and tableau-style reasoning.

pub mod counting;
pub mod tableau;
pub mod types;

pub use tableau::Reasoner;
pub use types::{
    candidate_types, existentials, find_witnessing_function, is_witnessing_function, realizable_types,
    succ_alch, witness_from_model, WitnessingFunction,
};
