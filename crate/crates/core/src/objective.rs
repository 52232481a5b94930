//! Expected-cost evaluation, set ratios and the ratio ordering of slots.

use alloc::vec::Vec;


use crate::instance::{Instance, Likelihoods, Variant};
use crate::scalar::{Scalar, SetRatio};
use crate::schedule::{ensure_valid, InvalidSchedule, Schedule};

/// Cost and likelihood summary of one set of tests.
///
/// `value` is `prod p_j` for testing and `pi(S)` for search, the quantity
/// that composes when the set is extended by one element.
#[derive(Clone, Debug)]
pub(crate) struct SetStats<P> {
    pub cost: u64,
    pub value: P,
}

impl<P: Scalar> SetStats<P> {
    pub fn empty(variant: Variant) -> Self {
        SetStats {
            cost: 0,
            value: match variant {
                Variant::Testing => P::one(),
                Variant::Search => P::zero(),
            },
        }
    }

    pub fn of(instance: &Instance<P>, set: &[usize]) -> Self {
        let mut stats = Self::empty(instance.variant());
        for &j in set {
            stats.push(instance, j);
        }
        stats
    }

    pub fn push(&mut self, instance: &Instance<P>, j: usize) {
        self.cost += instance.costs()[j];
        self.value = match instance.likelihoods() {
            Likelihoods::Success(p) => self.value.clone() * p[j].clone(),
            Likelihoods::Weights(_) => self.value.clone() + instance.hiding_probability(j),
        };
    }

    /// Probability that processing the set ends the run.
    pub fn resolution(&self, variant: Variant) -> P {
        match variant {
            Variant::Testing => P::one() - self.value.clone(),
            Variant::Search => self.value.clone(),
        }
    }

    pub fn ratio(&self, variant: Variant) -> SetRatio<P> {
        let r = self.resolution(variant);
        if r.is_zero() {
            SetRatio::Infinite
        } else {
            SetRatio::Finite(P::from_u64(self.cost) / r)
        }
    }
}

/// Objective of slots processed in the given order; no validation.
pub(crate) fn evaluate_stats<'a, P: Scalar>(
    variant: Variant,
    ordered: impl IntoIterator<Item = &'a SetStats<P>>,
) -> P {
    let mut survival = P::one();
    let mut total = P::zero();
    for stats in ordered {
        if stats.cost > 0 {
            total = total + P::from_u64(stats.cost) * survival.clone();
        }
        survival = match variant {
            Variant::Testing => survival * stats.value.clone(),
            Variant::Search => survival - stats.value.clone(),
        };
    }
    total
}

pub(crate) fn evaluate_slots<P: Scalar>(instance: &Instance<P>, slots: &[Vec<usize>]) -> P {
    let stats: Vec<SetStats<P>> = slots.iter().map(|s| SetStats::of(instance, s)).collect();
    evaluate_stats(instance.variant(), &stats)
}

/// Exact expected cost of a schedule.
///
/// Testing: `sum_t c(S_t) * prod_{j before t} p_j`.
/// Search: `sum_t c(S_t) * sum_{k >= t} pi(S_k)`.
pub fn evaluate<P: Scalar>(instance: &Instance<P>, schedule: &Schedule) -> Result<P, InvalidSchedule> {
    ensure_valid(instance, schedule)?;
    Ok(evaluate_slots(instance, schedule.slots()))
}

/// Floating-point evaluation for timing runs; never used for decisions.
pub fn evaluate_f64<P: Scalar>(instance: &Instance<P>, schedule: &Schedule) -> Result<f64, InvalidSchedule> {
    ensure_valid(instance, schedule)?;
    let costs = instance.costs();
    let mut survival = 1.0f64;
    let mut total = 0.0f64;
    match instance.likelihoods() {
        Likelihoods::Success(p) => {
            let p: Vec<f64> = p.iter().map(Scalar::to_f64).collect();
            for slot in schedule.slots() {
                let c: u64 = slot.iter().map(|&j| costs[j]).sum();
                total += c as f64 * survival;
                survival *= slot.iter().map(|&j| p[j]).product::<f64>();
            }
        }
        Likelihoods::Weights(w) => {
            let total_weight = instance.total_weight() as f64;
            for slot in schedule.slots() {
                let c: u64 = slot.iter().map(|&j| costs[j]).sum();
                total += c as f64 * survival;
                survival -= slot.iter().map(|&j| w[j] as f64).sum::<f64>() / total_weight;
            }
        }
    }
    Ok(total)
}

/// `c(S) / (1 - prod p_j)` for testing, `c(S) / pi(S)` for search.
///
/// Infinite when the denominator vanishes, and for the empty set.
pub fn set_ratio<P: Scalar>(instance: &Instance<P>, set: &[usize]) -> SetRatio<P> {
    if set.is_empty() {
        return SetRatio::Infinite;
    }
    SetStats::of(instance, set).ratio(instance.variant())
}

/// Slot permutation sorting ratios ascending, stable, infinite last.
pub(crate) fn ratio_order<P: Scalar>(variant: Variant, stats: &[SetStats<P>]) -> Vec<usize> {
    let keys: Vec<SetRatio<P>> = stats.iter().map(|s| s.ratio(variant)).collect();
    let mut order: Vec<usize> = (0..stats.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    order
}

/// Reorders slots by non-decreasing set ratio. Empty slots end up last.
pub fn sort_by_ratio<P: Scalar>(instance: &Instance<P>, schedule: &Schedule) -> Result<Schedule, InvalidSchedule> {
    ensure_valid(instance, schedule)?;
    Ok(sort_slots(instance, schedule.slots()))
}

pub(crate) fn sort_slots<P: Scalar>(instance: &Instance<P>, slots: &[Vec<usize>]) -> Schedule {
    let stats: Vec<SetStats<P>> = slots.iter().map(|s| SetStats::of(instance, s)).collect();
    let order = ratio_order(instance.variant(), &stats);
    Schedule::new(order.into_iter().map(|t| slots[t].clone()).collect())
}

/// Interval known to contain the optimum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bounds<P> {
    pub lower: P,
    pub upper: P,
}

/// Testing: `[c(N) prod p_j, c(N)]`. Search: the lower end is the cost of
/// the one-location-at-a-time schedule in ratio order, which ignores the
/// deadline and can only be cheaper than any slotted schedule.
pub fn global_bounds<P: Scalar>(instance: &Instance<P>) -> Bounds<P> {
    let upper = P::from_u64(instance.total_cost());
    let lower = match instance.likelihoods() {
        Likelihoods::Success(p) => p.iter().fold(upper.clone(), |acc, q| acc * q.clone()),
        Likelihoods::Weights(_) => {
            let singles: Vec<Vec<usize>> = (0..instance.n()).map(|j| alloc::vec![j]).collect();
            let sorted = sort_slots(instance, &singles);
            evaluate_slots(instance, sorted.slots())
        }
    };
    Bounds { lower, upper }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use num_traits::One;
    use alloc::vec;

    fn sched(slots: &[&[usize]]) -> Schedule {
        Schedule::new(slots.iter().map(|s| s.to_vec()).collect())
    }

    #[test]
    fn two_test_evaluation() {
        let inst = Instance::testing(1, 2, vec![1, 2], vec![ratio(1, 2), ratio(1, 1)]).unwrap();
        assert_eq!(evaluate(&inst, &sched(&[&[0], &[1]])).unwrap(), ratio(2, 1));
        assert_eq!(evaluate_f64(&inst, &sched(&[&[0], &[1]])).unwrap(), 2.0);
    }

    #[test]
    fn certain_tests_cost_everything() {
        let inst = Instance::testing(2, 2, vec![4, 5, 6], vec![Rational::one(); 3]).unwrap();
        for s in [sched(&[&[0, 1], &[2]]), sched(&[&[2], &[0, 1]]), sched(&[&[0], &[1, 2]])] {
            assert_eq!(evaluate(&inst, &s).unwrap(), ratio(15, 1));
        }
    }

    #[test]
    fn single_location_search() {
        let inst = Instance::<Rational>::search(1, 1, vec![5], vec![1]).unwrap();
        assert_eq!(evaluate(&inst, &sched(&[&[0]])).unwrap(), ratio(5, 1));
    }

    #[test]
    fn greedy_gap_schedule_value() {
        let m = 10;
        let inst = Instance::testing(
            2,
            2,
            vec![1, 0, 10],
            vec![ratio(1, m), ratio(m - 1, m), ratio(m - 1, m)],
        )
        .unwrap();
        assert_eq!(evaluate(&inst, &sched(&[&[1], &[0, 2]])).unwrap(), ratio(99, 10));
    }

    #[test]
    fn ratios() {
        let inst = Instance::testing(1, 2, vec![3, 1], vec![ratio(1, 2), ratio(1, 1)]).unwrap();
        assert_eq!(set_ratio(&inst, &[0]), SetRatio::Finite(ratio(6, 1)));
        assert_eq!(set_ratio(&inst, &[1]), SetRatio::Infinite);
        assert_eq!(set_ratio(&inst, &[]), SetRatio::Infinite);

        let search = Instance::<Rational>::search(1, 2, vec![4, 0], vec![2, 6]).unwrap();
        assert_eq!(set_ratio(&search, &[0]), SetRatio::Finite(ratio(16, 1)));
    }

    #[test]
    fn sorting_is_stable_with_infinity_last() {
        // ratios: {0} -> 6, {1} -> 2
        let inst = Instance::testing(1, 2, vec![3, 1], vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let sorted = sort_by_ratio(&inst, &sched(&[&[0], &[1]])).unwrap();
        assert_eq!(sorted, sched(&[&[1], &[0]]));
        assert_eq!(sort_by_ratio(&inst, &sorted).unwrap(), sorted);

        let inst = Instance::testing(1, 3, vec![0, 2, 2], vec![ratio(1, 1), ratio(1, 2), ratio(1, 2)]).unwrap();
        let sorted = sort_by_ratio(&inst, &sched(&[&[0], &[2], &[1]])).unwrap();
        assert_eq!(sorted, sched(&[&[2], &[1], &[0]]));
    }

    #[test]
    fn bounds() {
        let inst = Instance::testing(1, 2, vec![1, 2], vec![ratio(1, 2), ratio(1, 1)]).unwrap();
        assert_eq!(
            global_bounds(&inst),
            Bounds {
                lower: ratio(3, 2),
                upper: ratio(3, 1)
            }
        );
        let inst = Instance::testing(1, 2, vec![1, 2], vec![Rational::one(); 2]).unwrap();
        let b = global_bounds(&inst);
        assert_eq!(b.lower, b.upper);

        let search = Instance::<Rational>::search(1, 2, vec![1, 2], vec![1, 1]).unwrap();
        assert_eq!(global_bounds(&search).lower, ratio(2, 1));
    }
}
