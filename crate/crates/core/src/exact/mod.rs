//! Exact solvers: exhaustive oracle, two-slot dynamic program, and its
//! rounded approximation scheme.

mod dp;
mod fptas;
mod oracle;

pub use dp::{dp_two_slots, value_table};
pub use fptas::fptas_two_slots;
pub use oracle::{brute_force_optimum, ordered_optimum, DEFAULT_NODE_LIMIT};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("instance too large for oracle: {estimate} partitions exceed limit {limit}")]
    TooLarge { estimate: u128, limit: u128 },
    #[error("two-slot solver needs T = 2, got T = {0}")]
    DeadlineNotTwo(usize),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("cost total {0} is too large for the dynamic program")]
    BudgetTooLarge(u128),
}
