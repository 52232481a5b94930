use alloc::vec;
use alloc::vec::Vec;

use super::ExactError;
use crate::instance::{Instance, Likelihoods};
use crate::objective::evaluate_slots;
use crate::report::{Method, SolveReport, Status};
use crate::scalar::Scalar;
use crate::schedule::Schedule;

/// Backward knapsack over stages `start..n`: for every budget `b` and
/// cardinality `s`, the best value of a set with cost exactly `b` and `s`
/// elements. Ties keep the set that skips the current stage.
pub(crate) struct Knapsack<V> {
    machines: usize,
    budget: usize,
    start: usize,
    costs: Vec<usize>,
    layer: Vec<Option<V>>,
    // choice[stage - start] has bit (b * (m + 1) + s) set when stage is taken
    choice: Vec<Vec<u64>>,
}

impl<V: Clone> Knapsack<V> {
    pub fn run(
        costs: Vec<usize>,
        start: usize,
        machines: usize,
        budget: usize,
        unit: V,
        extend: impl Fn(&V, usize) -> V,
        better: impl Fn(&V, &V) -> bool,
    ) -> Self {
        let width = machines + 1;
        let cells = (budget + 1) * width;
        let mut layer: Vec<Option<V>> = vec![None; cells];
        layer[0] = Some(unit);
        let n = costs.len();
        let mut choice = vec![Vec::new(); n - start];
        for i in (start..n).rev() {
            let mut bits = vec![0u64; cells.div_ceil(64)];
            let mut next = layer.clone();
            let c = costs[i];
            if c <= budget {
                for b in c..=budget {
                    for s in 1..width {
                        let Some(prev) = &layer[(b - c) * width + s - 1] else {
                            continue;
                        };
                        let candidate = extend(prev, i);
                        let cell = b * width + s;
                        let take = match &layer[cell] {
                            None => true,
                            Some(skip) => better(&candidate, skip),
                        };
                        if take {
                            next[cell] = Some(candidate);
                            bits[cell / 64] |= 1 << (cell % 64);
                        }
                    }
                }
            }
            layer = next;
            choice[i - start] = bits;
        }
        Knapsack {
            machines,
            budget,
            start,
            costs,
            layer,
            choice,
        }
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Best value of a full set (`m` elements) with cost exactly `b`.
    pub fn full(&self, b: usize) -> Option<&V> {
        self.layer[b * (self.machines + 1) + self.machines].as_ref()
    }

    pub fn reconstruct(&self, mut b: usize) -> Vec<usize> {
        let width = self.machines + 1;
        let mut s = self.machines;
        let mut set = Vec::with_capacity(s);
        for i in self.start..self.costs.len() {
            if s == 0 {
                break;
            }
            let cell = b * width + s;
            if self.choice[i - self.start][cell / 64] >> (cell % 64) & 1 == 1 {
                set.push(i);
                b -= self.costs[i];
                s -= 1;
            }
        }
        debug_assert_eq!((b, s), (0, 0));
        set
    }
}

pub(crate) fn budget_of(total: u128) -> Result<usize, ExactError> {
    // Keeps the choice bitsets within a few hundred megabytes.
    const MAX_BUDGET: u128 = 1 << 26;
    if total > MAX_BUDGET {
        return Err(ExactError::BudgetTooLarge(total));
    }
    Ok(total as usize)
}

/// Optimal two-slot schedule by dynamic programming over the first slot.
///
/// Pads to `n = 2m`, computes for every budget `b` the best full first slot
/// of cost `b` (smallest `prod p` or largest weight), and picks the `b`
/// minimising `b + survival * (c(N) - b)`, smallest `b` on ties.
pub fn dp_two_slots<P: Scalar>(instance: &Instance<P>) -> Result<SolveReport<P>, ExactError> {
    if instance.deadline() != 2 {
        return Err(ExactError::DeadlineNotTwo(instance.deadline()));
    }
    let padded = instance.pad_to_full();
    let full = &padded.instance;
    let m = full.machines();
    let total = full.total_cost();
    let budget = budget_of(total as u128)?;
    let costs: Vec<usize> = full.costs().iter().map(|&c| c as usize).collect();
    let first = match full.likelihoods() {
        Likelihoods::Success(p) => {
            let table = Knapsack::run(costs, 0, m, budget, P::one(), |v, i| v.clone() * p[i].clone(), |a, b| a < b);
            let objective = |b: usize, v: &P| P::from_u64(b as u64) + v.clone() * P::from_u64(total - b as u64);
            best_budget(&table, objective).map(|b| table.reconstruct(b))
        }
        Likelihoods::Weights(w) => {
            let weight_total = full.total_weight();
            let table = Knapsack::run(costs, 0, m, budget, 0u64, |v, i| v + w[i], |a, b| a > b);
            let objective = |b: usize, v: &u64| {
                P::from_u64(b as u64)
                    + P::from_u64(total - b as u64) * P::from_u64(weight_total - v) / P::from_u64(weight_total)
            };
            best_budget(&table, objective).map(|b| table.reconstruct(b))
        }
    }
    .expect("a padded instance always has a full first slot");
    let schedule = split(&padded, first);
    let objective = evaluate_slots(instance, schedule.slots());
    Ok(SolveReport::new(schedule, objective, Method::Dp2, Status::Optimal))
}

/// Budget with the smallest objective; the smallest budget wins ties.
pub(crate) fn best_budget<V: Clone, P: Scalar>(
    table: &Knapsack<V>,
    objective: impl Fn(usize, &V) -> P,
) -> Option<usize> {
    let mut best: Option<(P, usize)> = None;
    for b in 0..=table.budget() {
        if let Some(v) = table.full(b) {
            let z = objective(b, v);
            if best.as_ref().map_or(true, |(bz, _)| z < *bz) {
                best = Some((z, b));
            }
        }
    }
    best.map(|(_, b)| b)
}

/// Two-slot schedule of the original tests with `first` (padded indices)
/// in the first slot.
pub(crate) fn split<P: Scalar>(padded: &crate::instance::Padded<P>, first: Vec<usize>) -> Schedule {
    let n = padded.instance.n();
    let mut in_first = vec![false; n];
    for &j in &first {
        in_first[j] = true;
    }
    let second: Vec<usize> = (0..n).filter(|&j| !in_first[j]).collect();
    let mut first = first;
    first.sort_unstable();
    padded.project(&Schedule::new(vec![first, second]))
}

/// The full value table of the testing recursion, `[stage][b][s]`, stage
/// `n` being the boundary. Intended for inspection on small instances.
pub fn value_table<P: Scalar>(instance: &Instance<P>) -> Vec<Vec<Vec<Option<P>>>> {
    let n = instance.n();
    let m = instance.machines();
    let total = instance.total_cost() as usize;
    let mut table = vec![vec![vec![None; m + 1]; total + 1]; n + 1];
    table[n][0][0] = Some(P::one());
    for i in (0..n).rev() {
        let c = instance.costs()[i] as usize;
        let p = instance.pass_probability(i);
        for b in 0..=total {
            for s in 0..=m {
                let skip = table[i + 1][b][s].clone();
                let take = if b >= c && s >= 1 {
                    table[i + 1][b - c][s - 1].clone().map(|v| p.clone() * v)
                } else {
                    None
                };
                table[i][b][s] = match (take, skip) {
                    (Some(t), Some(k)) => Some(if t < k { t } else { k }),
                    (t, k) => t.or(k),
                };
            }
        }
    }
    table
}
