//! Finite-depth shadows of completions: level subgroups, ball approximants, coset chains,
//! local quotients and the factorization predicates on presented filters.

pub mod chain;
pub mod filter;
pub mod level;
pub mod quotient;

pub use chain::{
    chain_invert, chain_multiply, chain_multiply_to, chain_of, chain_of_int, left_right_exchange, residue_chain, BallChain,
    CosetChain, LeftChain, ResidueChain,
};
pub use filter::{
    compare, exists_discrete_kernel_factorization, exists_factorization, exists_injective_factorization, subset_factorization,
    Bound, FilterKind, FilterSpec, Host, PredicateResult, ValuationFilter, ZBasis,
};
pub use level::{approximate, schlichting_level_subgroup, BallApproximant, LevelSubgroup};
pub use quotient::{local_quotients, u_closure, LocalQuotient};
