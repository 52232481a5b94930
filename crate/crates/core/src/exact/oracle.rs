use alloc::vec;
use alloc::vec::Vec;

use super::ExactError;
use crate::enumerate::{for_each_schedule, partition_count, schedule_count};
use crate::instance::{Instance, Variant};
use crate::objective::{evaluate_slots, evaluate_stats, ratio_order, SetStats};
use crate::report::{Method, SolveReport, Status};
use crate::scalar::Scalar;
use crate::schedule::Schedule;

pub const DEFAULT_NODE_LIMIT: u128 = 5_000_000;

struct Search<'a, P> {
    instance: &'a Instance<P>,
    variant: Variant,
    unit: Vec<P>,
    blocks: Vec<Vec<usize>>,
    stats: Vec<SetStats<P>>,
    best: Option<(P, Vec<Vec<usize>>)>,
}

impl<P: Scalar> Search<'_, P> {
    fn add(&mut self, b: usize, j: usize) -> SetStats<P> {
        let old = self.stats[b].clone();
        let s = &mut self.stats[b];
        s.cost += self.instance.costs()[j];
        s.value = match self.variant {
            Variant::Testing => s.value.clone() * self.unit[j].clone(),
            Variant::Search => s.value.clone() + self.unit[j].clone(),
        };
        self.blocks[b].push(j);
        old
    }

    fn remove(&mut self, b: usize, old: SetStats<P>) {
        self.stats[b] = old;
        self.blocks[b].pop();
    }

    fn leaf(&mut self) {
        let order = ratio_order(self.variant, &self.stats);
        let value = evaluate_stats(self.variant, order.iter().map(|&t| &self.stats[t]));
        if self.best.as_ref().map_or(true, |(b, _)| value < *b) {
            let slots = order.iter().map(|&t| self.blocks[t].clone()).collect();
            self.best = Some((value, slots));
        }
    }

    fn rec(&mut self, j: usize) {
        let n = self.instance.n();
        if j == n {
            self.leaf();
            return;
        }
        let m = self.instance.machines();
        for b in 0..self.blocks.len() {
            if self.blocks[b].len() < m {
                let old = self.add(b, j);
                self.rec(j + 1);
                self.remove(b, old);
            }
        }
        if self.blocks.len() < self.instance.deadline() {
            self.blocks.push(Vec::new());
            self.stats.push(SetStats::empty(self.variant));
            let old = self.add(self.blocks.len() - 1, j);
            self.rec(j + 1);
            let last = self.blocks.len() - 1;
            self.remove(last, old);
            self.blocks.pop();
            self.stats.pop();
        }
    }
}

/// Optimal schedule by enumerating every unordered partition into at most
/// `T` blocks of at most `m` tests and ordering each by set ratio.
///
/// Among equal objectives the partition enumerated first wins (blocks keyed
/// by smallest element, lexicographic). Empty slots are appended at the end.
pub fn brute_force_optimum<P: Scalar>(
    instance: &Instance<P>,
    node_limit: u128,
) -> Result<SolveReport<P>, ExactError> {
    let estimate = partition_count(instance.n(), instance.machines(), instance.deadline());
    if estimate > node_limit {
        return Err(ExactError::TooLarge {
            estimate,
            limit: node_limit,
        });
    }
    let variant = instance.variant();
    let unit = (0..instance.n())
        .map(|j| match variant {
            Variant::Testing => instance.pass_probability(j),
            Variant::Search => instance.hiding_probability(j),
        })
        .collect();
    let mut search = Search {
        instance,
        variant,
        unit,
        blocks: Vec::new(),
        stats: Vec::new(),
        best: None,
    };
    search.rec(0);
    let (objective, mut slots) = search.best.expect("a feasible instance has a partition");
    slots.resize(instance.deadline(), Vec::new());
    Ok(SolveReport::new(
        Schedule::new(slots),
        objective,
        Method::Oracle,
        Status::Optimal,
    ))
}

/// Optimum over every ordered schedule, without the ratio-order shortcut.
/// Only meant for cross-checking the oracle on small instances.
pub fn ordered_optimum<P: Scalar>(instance: &Instance<P>, node_limit: u128) -> Result<(P, Schedule), ExactError> {
    let estimate = schedule_count(instance.n(), instance.machines(), instance.deadline());
    if estimate > node_limit {
        return Err(ExactError::TooLarge {
            estimate,
            limit: node_limit,
        });
    }
    let mut best: Option<(P, Vec<Vec<usize>>)> = None;
    for_each_schedule(instance.n(), instance.machines(), instance.deadline(), |slots| {
        let value = evaluate_slots(instance, slots);
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, slots.to_vec()));
        }
    });
    let (value, slots) = best.unwrap_or((P::zero(), vec![Vec::new(); instance.deadline()]));
    Ok((value, Schedule::new(slots)))
}
