use alloc::vec::Vec;

use super::{initial_partitions, Partition};
use crate::instance::Instance;
use crate::objective::{evaluate_stats, ratio_order, SetStats};
use crate::report::{Method, SolveReport, Status};
use crate::scalar::Scalar;
use crate::schedule::Schedule;

/// A neighbourhood move on a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    /// Swap two tests that sit in different sets.
    Interchange { a: usize, b: usize },
    /// Move `test` into set `target`, which has room for it.
    Insertion { test: usize, target: usize },
}

impl Move {
    fn apply(self, sets: &mut [Vec<usize>], home: &mut [usize]) {
        match self {
            Move::Interchange { a, b } => {
                let (sa, sb) = (home[a], home[b]);
                replace(&mut sets[sa], a, b);
                replace(&mut sets[sb], b, a);
                home[a] = sb;
                home[b] = sa;
            }
            Move::Insertion { test, target } => {
                sets[home[test]].retain(|&j| j != test);
                sets[target].push(test);
                home[test] = target;
            }
        }
    }
}

fn replace(set: &mut [usize], from: usize, to: usize) {
    for j in set.iter_mut() {
        if *j == from {
            *j = to;
        }
    }
}

/// Objective of a partition with its sets in ratio order.
pub fn partition_value<P: Scalar>(instance: &Instance<P>, partition: &Partition) -> P {
    let stats: Vec<SetStats<P>> = partition.sets().iter().map(|s| SetStats::of(instance, s)).collect();
    value_of(instance, &stats)
}

fn value_of<P: Scalar>(instance: &Instance<P>, stats: &[SetStats<P>]) -> P {
    let order = ratio_order(instance.variant(), stats);
    evaluate_stats(instance.variant(), order.iter().map(|&t| &stats[t]))
}

fn homes(n: usize, sets: &[Vec<usize>]) -> Vec<usize> {
    let mut home = alloc::vec![usize::MAX; n];
    for (t, set) in sets.iter().enumerate() {
        for &j in set {
            home[j] = t;
        }
    }
    home
}

/// First move that strictly lowers the ratio-ordered objective, with its
/// new value.
///
/// Scan order: interchanges `(a, b)` with `a < b` ascending, then insertions
/// by test ascending and target set ascending.
pub fn find_improving_move<P: Scalar>(instance: &Instance<P>, partition: &Partition) -> Option<(Move, P)> {
    let sets = partition.sets();
    let stats: Vec<SetStats<P>> = sets.iter().map(|s| SetStats::of(instance, s)).collect();
    let current = value_of(instance, &stats);
    scan(instance, sets, &homes(instance.n(), sets), stats, &current)
}

fn scan<P: Scalar>(
    instance: &Instance<P>,
    sets: &[Vec<usize>],
    home: &[usize],
    mut stats: Vec<SetStats<P>>,
    current: &P,
) -> Option<(Move, P)> {
    let n = instance.n();
    let m = instance.machines();
    let try_move = |mv: Move, stats: &mut Vec<SetStats<P>>| -> Option<P> {
        let mut trial: Vec<Vec<usize>> = Vec::new();
        let touched: [usize; 2] = match mv {
            Move::Interchange { a, b } => [home[a], home[b]],
            Move::Insertion { test, target } => [home[test], target],
        };
        for &t in &touched {
            let mut set = sets[t].clone();
            match mv {
                Move::Interchange { a, b } => {
                    replace(&mut set, a, usize::MAX);
                    replace(&mut set, b, a);
                    replace(&mut set, usize::MAX, b);
                }
                Move::Insertion { test, target } => {
                    if t == target {
                        set.push(test);
                    } else {
                        set.retain(|&j| j != test);
                    }
                }
            }
            trial.push(set);
        }
        let saved = [stats[touched[0]].clone(), stats[touched[1]].clone()];
        stats[touched[0]] = SetStats::of(instance, &trial[0]);
        stats[touched[1]] = SetStats::of(instance, &trial[1]);
        let value = value_of(instance, stats);
        let [s0, s1] = saved;
        stats[touched[0]] = s0;
        stats[touched[1]] = s1;
        if value < *current {
            Some(value)
        } else {
            None
        }
    };
    for a in 0..n {
        for b in a + 1..n {
            if home[a] != home[b] {
                let mv = Move::Interchange { a, b };
                if let Some(v) = try_move(mv, &mut stats) {
                    return Some((mv, v));
                }
            }
        }
    }
    for test in 0..n {
        for target in 0..sets.len() {
            if target != home[test] && sets[target].len() < m {
                let mv = Move::Insertion { test, target };
                if let Some(v) = try_move(mv, &mut stats) {
                    return Some((mv, v));
                }
            }
        }
    }
    None
}

/// First-improvement local search from `start`; returns the locally optimal
/// partition as a ratio-ordered schedule.
pub fn local_search<P: Scalar>(instance: &Instance<P>, start: &Partition) -> SolveReport<P> {
    let mut sets: Vec<Vec<usize>> = start.sets().to_vec();
    let mut home = homes(instance.n(), &sets);
    let mut stats: Vec<SetStats<P>> = sets.iter().map(|s| SetStats::of(instance, s)).collect();
    let mut current = value_of(instance, &stats);
    while let Some((mv, value)) = scan(instance, &sets, &home, stats.clone(), &current) {
        mv.apply(&mut sets, &mut home);
        stats = sets.iter().map(|s| SetStats::of(instance, s)).collect();
        current = value;
    }
    let order = ratio_order(instance.variant(), &stats);
    let schedule = Schedule::new(order.into_iter().map(|t| sets[t].clone()).collect());
    SolveReport::new(schedule, current, Method::LocalSearch, Status::Heuristic)
}

/// Local search from each of the three initial partitions; the best result
/// wins, the earliest start on ties.
pub fn multi_start<P: Scalar>(instance: &Instance<P>) -> SolveReport<P> {
    let mut best: Option<SolveReport<P>> = None;
    for start in initial_partitions(instance) {
        let rep = local_search(instance, &start);
        if best.as_ref().map_or(true, |b| rep.objective < b.objective) {
            best = Some(rep);
        }
    }
    let mut best = best.expect("three starts");
    best.method = Method::MultiStart;
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{brute_force_optimum, DEFAULT_NODE_LIMIT};
    use crate::objective::evaluate;
    use crate::scalar::ratio;
    use alloc::vec;

    #[test]
    fn optimal_start_is_kept() {
        let inst = Instance::testing(1, 2, vec![3, 1], vec![ratio(1, 2), ratio(1, 3)]).unwrap();
        let start = Partition::new(vec![vec![1], vec![0]]);
        let rep = local_search(&inst, &start);
        assert_eq!(rep.schedule, start.as_schedule());
        assert_eq!(rep.objective, ratio(2, 1));
    }

    #[test]
    fn improves_a_bad_start() {
        let inst = Instance::testing(2, 2, vec![1, 0, 10], vec![ratio(1, 10), ratio(9, 10), ratio(9, 10)]).unwrap();
        let start = Partition::new(vec![vec![1], vec![0, 2]]);
        let rep = local_search(&inst, &start);
        assert!(rep.objective < ratio(99, 10));
        assert_eq!(evaluate(&inst, &rep.schedule).unwrap(), rep.objective);
        assert!(find_improving_move(&inst, &Partition::from_schedule(&rep.schedule)).is_none());
    }

    #[test]
    fn insertion_into_empty_set() {
        let inst = Instance::testing(2, 2, vec![1, 1], vec![ratio(1, 2), ratio(1, 2)]).unwrap();
        let start = Partition::new(vec![vec![0, 1], vec![]]);
        let (mv, value) = find_improving_move(&inst, &start).unwrap();
        assert_eq!(mv, Move::Insertion { test: 0, target: 1 });
        assert_eq!(value, ratio(3, 2));
    }

    #[test]
    fn multi_start_single_test() {
        let inst = Instance::testing(1, 1, vec![2], vec![ratio(1, 2)]).unwrap();
        let rep = multi_start(&inst);
        assert_eq!(rep.objective, brute_force_optimum(&inst, DEFAULT_NODE_LIMIT).unwrap().objective);
        assert_eq!(rep.method, Method::MultiStart);
    }
}
