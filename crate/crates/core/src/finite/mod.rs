//! Exact AC-groups of small finite groups.
//!
//! For a finite group G the elementary moves (conjugation over every element
//! of G) permute the finite set `G^k`. This module computes the full group
//! they generate, its orbits, the set N_k(G) of tuples that normally generate
//! G, and the kernel of restricting the action to N_k(G).

mod ac;
mod chain;
mod group;
mod perm;

use thiserror::Error;

pub use ac::{
    fac_group, kernel_of_lambda, move_generators, move_permutation, n_k_set, orbits, FiniteMove, KernelReport,
    TupleSpace, DOMAIN_CEILING,
};
pub use chain::StabilizerChain;
pub use group::{FiniteGroup, CLOSURE_CEILING};
pub use perm::Permutation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a group: {0}")]
    Axiom(String),
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("closure exceeded {0} elements")]
    ClosureCeiling(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("tuple size must be at least 2, got {0}")]
    TupleSize(usize),
    #[error("{order}^{k} tuples exceeds the domain ceiling of {ceiling} points")]
    DomainTooLarge { order: usize, k: usize, ceiling: usize },
    #[error("N_{k}(G) is empty for |G| = {order}; the restriction map is undefined")]
    EmptyNk { order: usize, k: usize },
    #[error("invalid move {0}")]
    BadMove(String),
}
