//! Greedy ratio baseline, interchange/insertion local search and the
//! three-start driver.

mod greedy;
mod init;
mod local;

pub use greedy::{greedy_min_ratio, DEFAULT_SUBSET_CAP};
pub use init::{initial_partitions, InitOrder};
pub use local::{find_improving_move, local_search, multi_start, partition_value, Move};

use alloc::vec::Vec;

use crate::instance::Instance;
use crate::scalar::Scalar;
use crate::schedule::{validate, Schedule, Violation};

/// `T` unordered sets of at most `m` tests; the slot order is implied by
/// the set ratios.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    sets: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(sets: Vec<Vec<usize>>) -> Self {
        Partition { sets }
    }

    pub fn from_schedule(schedule: &Schedule) -> Self {
        Partition {
            sets: schedule.slots().to_vec(),
        }
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    /// Same checks as for a schedule.
    pub fn validate<P: Scalar>(&self, instance: &Instance<P>) -> Result<(), Vec<Violation>> {
        validate(instance, &Schedule::new(self.sets.clone()))
    }

    /// Sets as slots in their stored order.
    pub fn as_schedule(&self) -> Schedule {
        Schedule::new(self.sets.clone())
    }
}
