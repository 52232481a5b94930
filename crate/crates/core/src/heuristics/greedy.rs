use alloc::vec::Vec;

use thiserror::Error;

use crate::enumerate::{binomial, for_each_subset};
use crate::instance::Instance;
use crate::objective::{evaluate_slots, SetStats};
use crate::report::{Method, SolveReport, Status};
use crate::scalar::{Scalar, SetRatio};
use crate::schedule::Schedule;

pub const DEFAULT_SUBSET_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("slot {slot} would need {count} candidate subsets (cap {cap}); use fewer machines or raise the cap")]
pub struct TooManySubsets {
    pub slot: usize,
    pub count: u128,
    pub cap: u128,
}

/// Fills slots in order, each with the remaining subset of least ratio that
/// still leaves few enough tests for the later slots.
///
/// Candidates are non-empty subsets of at most `m` tests. Ties go to the
/// smaller subset, then to the lexicographically first one.
pub fn greedy_min_ratio<P: Scalar>(instance: &Instance<P>, subset_cap: u128) -> Result<SolveReport<P>, TooManySubsets> {
    let m = instance.machines();
    let deadline = instance.deadline();
    let variant = instance.variant();
    let mut remaining: Vec<usize> = (0..instance.n()).collect();
    let mut slots = Vec::with_capacity(deadline);
    for t in 1..=deadline {
        if remaining.is_empty() {
            slots.push(Vec::new());
            continue;
        }
        let later = m * (deadline - t);
        let lo = remaining.len().saturating_sub(later).max(1);
        let hi = m.min(remaining.len());
        let count = (lo..=hi).fold(0u128, |acc, s| acc.saturating_add(binomial(remaining.len(), s)));
        if count > subset_cap {
            return Err(TooManySubsets {
                slot: t,
                count,
                cap: subset_cap,
            });
        }
        let mut best: Option<(SetRatio<P>, Vec<usize>)> = None;
        for size in lo..=hi {
            for_each_subset(&remaining, size, |subset| {
                let r = SetStats::of(instance, subset).ratio(variant);
                if best.as_ref().map_or(true, |(b, _)| r < *b) {
                    best = Some((r, subset.to_vec()));
                }
            });
        }
        let (_, chosen) = best.expect("at least one admissible subset");
        remaining.retain(|j| !chosen.contains(j));
        slots.push(chosen);
    }
    let objective = evaluate_slots(instance, &slots);
    Ok(SolveReport::new(Schedule::new(slots), objective, Method::Greedy, Status::Heuristic))
}
