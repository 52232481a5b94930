//! Instance generators: seeded random instances, the two adversarial
//! families, and the search-to-testing reduction.

mod families;
mod random;
mod reduction;

pub use families::{gen_greedy_gap, gen_locality_gap, locality_gap_m, LocalityGap};
pub use random::{gen_random, GenConfig, Q_RANGES};
pub use reduction::{check_reduction, reduce_search_to_testing, ReductionCheck, ReductionParams};

use alloc::string::String;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("greedy-gap family needs M >= 2, got {0}")]
    GreedyGapM(u64),
    #[error("locality-gap family needs c >= 2 and k >= 2, got c = {c}, k = {k}")]
    LocalityGapParams { c: u64, k: u32 },
    #[error("reduction needs a search instance")]
    NotSearch,
    #[error("alpha must be non-negative")]
    NegativeAlpha,
    #[error("{count} schedules exceed the enumeration limit {limit}")]
    TooManySchedules { count: u128, limit: u128 },
}
