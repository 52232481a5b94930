use alloc::vec::Vec;
use core::cmp::Ordering;

use super::Partition;
use crate::instance::{Instance, Likelihoods};
use crate::objective::set_ratio;
use crate::scalar::Scalar;

/// The three orders used to seed local search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitOrder {
    /// Cost ascending.
    Cost,
    /// Testing: `p_j` ascending. Search: `pi_j` descending.
    Likelihood,
    /// Singleton ratio ascending.
    Ratio,
}

impl InitOrder {
    pub const ALL: [InitOrder; 3] = [InitOrder::Cost, InitOrder::Likelihood, InitOrder::Ratio];
}

/// Partitions from filling slots `m` tests at a time along each order.
///
/// Tests that can never end the run (`p_j = 1`, or weight 0) are moved to
/// the front when they are free and to the back otherwise. Remaining ties
/// keep index order.
pub fn initial_partitions<P: Scalar>(instance: &Instance<P>) -> [Partition; 3] {
    InitOrder::ALL.map(|order| fill(instance, &sorted(instance, order)))
}

fn sorted<P: Scalar>(instance: &Instance<P>, order: InitOrder) -> Vec<usize> {
    let costs = instance.costs();
    let inert = |j: usize| match instance.likelihoods() {
        Likelihoods::Success(p) => p[j].is_one(),
        Likelihoods::Weights(w) => w[j] == 0,
    };
    let class = |j: usize| match (inert(j), costs[j] == 0) {
        (true, true) => 0,
        (false, _) => 1,
        (true, false) => 2,
    };
    let key = |a: usize, b: usize| -> Ordering {
        match order {
            InitOrder::Cost => costs[a].cmp(&costs[b]),
            InitOrder::Likelihood => match instance.likelihoods() {
                Likelihoods::Success(p) => p[a].cmp(&p[b]),
                Likelihoods::Weights(w) => w[b].cmp(&w[a]),
            },
            InitOrder::Ratio => set_ratio(instance, &[a]).cmp(&set_ratio(instance, &[b])),
        }
    };
    let mut tests: Vec<usize> = (0..instance.n()).collect();
    tests.sort_by(|&a, &b| class(a).cmp(&class(b)).then_with(|| key(a, b)).then(a.cmp(&b)));
    tests
}

fn fill<P: Scalar>(instance: &Instance<P>, order: &[usize]) -> Partition {
    let m = instance.machines();
    let mut sets: Vec<Vec<usize>> = order.chunks(m).map(|c| c.to_vec()).collect();
    sets.resize(instance.deadline(), Vec::new());
    Partition::new(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ratio, Rational};
    use alloc::vec;

    #[test]
    fn free_certain_test_goes_first() {
        let inst = Instance::testing(
            2,
            2,
            vec![3, 1, 0, 2],
            vec![ratio(1, 2), ratio(1, 2), ratio(1, 1), ratio(1, 3)],
        )
        .unwrap();
        let [by_cost, by_p, by_ratio] = initial_partitions(&inst);
        assert_eq!(by_cost.sets(), &[vec![2, 1], vec![3, 0]]);
        assert_eq!(by_p.sets(), &[vec![2, 3], vec![0, 1]]);
        // ratios 6, 2, -, 3
        assert_eq!(by_ratio.sets(), &[vec![2, 1], vec![3, 0]]);
    }

    #[test]
    fn costly_certain_test_goes_last() {
        let inst = Instance::testing(
            2,
            2,
            vec![5, 1, 2, 9],
            vec![ratio(1, 1), ratio(1, 2), ratio(1, 3), ratio(1, 4)],
        )
        .unwrap();
        for part in initial_partitions(&inst) {
            assert_eq!(part.sets()[1][1], 0);
        }
    }

    #[test]
    fn search_prefers_heavy_locations() {
        let inst = Instance::<Rational>::search(1, 3, vec![1, 1, 1], vec![1, 5, 2]).unwrap();
        let [_, by_pi, _] = initial_partitions(&inst);
        assert_eq!(by_pi.sets(), &[vec![1], vec![2], vec![0]]);
    }
}
