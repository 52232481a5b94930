//! Problem data for the testing and search variants.

use alloc::vec::Vec;

use thiserror::Error;

use crate::scalar::{sum_u64, Rational, Scalar};
use crate::schedule::Schedule;

/// Which objective an instance is scored with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Independent tests; halt at the first failure.
    Testing,
    /// Exactly one location hides the target; halt when it is found.
    Search,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Testing => "testing",
            Variant::Search => "search",
        }
    }
}

/// Per-test likelihood data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Likelihoods<P> {
    /// Success probabilities `p_j` in `[0, 1]`.
    Success(Vec<P>),
    /// Integer weights `w_j`; the hiding probability is `w_j / w(N)`.
    Weights(Vec<u64>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("machines and deadline must be positive (m = {machines}, T = {deadline})")]
    ZeroDimension { machines: usize, deadline: usize },
    #[error("{costs} costs but {likelihoods} probabilities/weights")]
    LengthMismatch { costs: usize, likelihoods: usize },
    #[error("n = {n} tests do not fit into m*T = {capacity} slots")]
    Overfull { n: usize, capacity: usize },
    #[error("m = {machines} exceeds n = {n}")]
    TooManyMachines { machines: usize, n: usize },
    #[error("T = {deadline} exceeds n = {n}")]
    DeadlineTooLong { deadline: usize, n: usize },
    #[error("probability of test {test} lies outside [0, 1]")]
    ProbabilityOutOfRange { test: usize },
    #[error("search weights sum to zero")]
    ZeroTotalWeight,
}

/// A validated instance: `m` machines, deadline `T`, costs and likelihoods.
///
/// Test indices are 0-based internally; file formats and LP names use 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance<P = Rational> {
    machines: usize,
    deadline: usize,
    costs: Vec<u64>,
    likelihoods: Likelihoods<P>,
}

impl<P: Scalar> Instance<P> {
    pub fn new(
        machines: usize,
        deadline: usize,
        costs: Vec<u64>,
        likelihoods: Likelihoods<P>,
    ) -> Result<Self, InstanceError> {
        if machines == 0 || deadline == 0 {
            return Err(InstanceError::ZeroDimension { machines, deadline });
        }
        let n = costs.len();
        let len = match &likelihoods {
            Likelihoods::Success(p) => p.len(),
            Likelihoods::Weights(w) => w.len(),
        };
        if len != n {
            return Err(InstanceError::LengthMismatch {
                costs: n,
                likelihoods: len,
            });
        }
        let capacity = machines.saturating_mul(deadline);
        if n > capacity {
            return Err(InstanceError::Overfull { n, capacity });
        }
        if machines > n {
            return Err(InstanceError::TooManyMachines { machines, n });
        }
        if deadline > n {
            return Err(InstanceError::DeadlineTooLong { deadline, n });
        }
        match &likelihoods {
            Likelihoods::Success(probs) => {
                for (test, p) in probs.iter().enumerate() {
                    if *p < P::zero() || *p > P::one() {
                        return Err(InstanceError::ProbabilityOutOfRange { test });
                    }
                }
            }
            Likelihoods::Weights(weights) => {
                if weights.iter().all(|&w| w == 0) {
                    return Err(InstanceError::ZeroTotalWeight);
                }
                weights
                    .iter()
                    .try_fold(0u64, |acc, &w| acc.checked_add(w))
                    .expect("weight total overflows u64");
            }
        }
        Ok(Instance {
            machines,
            deadline,
            costs,
            likelihoods,
        })
    }

    pub fn testing(
        machines: usize,
        deadline: usize,
        costs: Vec<u64>,
        probs: Vec<P>,
    ) -> Result<Self, InstanceError> {
        Self::new(machines, deadline, costs, Likelihoods::Success(probs))
    }

    pub fn search(
        machines: usize,
        deadline: usize,
        costs: Vec<u64>,
        weights: Vec<u64>,
    ) -> Result<Self, InstanceError> {
        Self::new(machines, deadline, costs, Likelihoods::Weights(weights))
    }

    pub fn variant(&self) -> Variant {
        match self.likelihoods {
            Likelihoods::Success(_) => Variant::Testing,
            Likelihoods::Weights(_) => Variant::Search,
        }
    }

    pub fn n(&self) -> usize {
        self.costs.len()
    }

    pub fn machines(&self) -> usize {
        self.machines
    }

    pub fn deadline(&self) -> usize {
        self.deadline
    }

    pub fn costs(&self) -> &[u64] {
        &self.costs
    }

    pub fn likelihoods(&self) -> &Likelihoods<P> {
        &self.likelihoods
    }

    pub fn success_probs(&self) -> Option<&[P]> {
        match &self.likelihoods {
            Likelihoods::Success(p) => Some(p),
            Likelihoods::Weights(_) => None,
        }
    }

    pub fn weights(&self) -> Option<&[u64]> {
        match &self.likelihoods {
            Likelihoods::Success(_) => None,
            Likelihoods::Weights(w) => Some(w),
        }
    }

    pub fn total_cost(&self) -> u64 {
        sum_u64(self.costs.iter().copied())
    }

    /// `w(N)` for search instances, 0 for testing instances.
    pub fn total_weight(&self) -> u64 {
        self.weights().map_or(0, |w| sum_u64(w.iter().copied()))
    }

    pub fn set_cost(&self, set: &[usize]) -> u64 {
        sum_u64(set.iter().map(|&j| self.costs[j]))
    }

    /// Hiding probability `pi_j` of a search location.
    pub fn hiding_probability(&self, j: usize) -> P {
        let weights = self.weights().expect("search instance");
        P::from_u64(weights[j]) / P::from_u64(self.total_weight())
    }

    /// Probability that a single test passes (testing) or that its
    /// location is empty (search).
    pub fn pass_probability(&self, j: usize) -> P {
        match &self.likelihoods {
            Likelihoods::Success(p) => p[j].clone(),
            Likelihoods::Weights(_) => P::one() - self.hiding_probability(j),
        }
    }

    /// Probability that work continues after every element of `set` was
    /// processed: `prod p_j` (testing) or `1 - pi(set)` (search).
    pub fn survival(&self, set: &[usize]) -> P {
        match &self.likelihoods {
            Likelihoods::Success(p) => set
                .iter()
                .fold(P::one(), |acc, &j| acc * p[j].clone()),
            Likelihoods::Weights(w) => {
                let mass = sum_u64(set.iter().map(|&j| w[j]));
                P::from_u64(self.total_weight() - mass) / P::from_u64(self.total_weight())
            }
        }
    }

    /// Probability mass resolved by `set`: `1 - prod p_j` or `pi(set)`.
    pub fn resolution(&self, set: &[usize]) -> P {
        P::one() - self.survival(set)
    }

    /// Same instance with every cost multiplied by `factor`.
    pub fn scale_costs(&self, factor: u64) -> Self {
        let mut out = self.clone();
        for c in &mut out.costs {
            *c = c.checked_mul(factor).expect("scaled cost overflows u64");
        }
        out
    }

    /// Pads with zero-cost dummies (`p = 1`, or weight 0) up to `n = m*T`.
    pub fn pad_to_full(&self) -> Padded<P> {
        let target = self.machines * self.deadline;
        let original_n = self.n();
        let mut padded = self.clone();
        let extra = target - original_n;
        padded.costs.extend(core::iter::repeat(0).take(extra));
        match &mut padded.likelihoods {
            Likelihoods::Success(p) => p.extend(core::iter::repeat(P::one()).take(extra)),
            Likelihoods::Weights(w) => w.extend(core::iter::repeat(0).take(extra)),
        }
        Padded {
            instance: padded,
            original_n,
        }
    }

    pub fn is_full(&self) -> bool {
        self.n() == self.machines * self.deadline
    }
}

/// An instance extended with dummy tests, remembering where the originals end.
///
/// Original tests keep their indices; dummies occupy `original_n..m*T`.
#[derive(Clone, Debug)]
pub struct Padded<P = Rational> {
    pub instance: Instance<P>,
    pub original_n: usize,
}

impl<P: Scalar> Padded<P> {
    pub fn is_dummy(&self, j: usize) -> bool {
        j >= self.original_n
    }

    /// Drops dummy tests from a schedule of the padded instance.
    pub fn project(&self, schedule: &Schedule) -> Schedule {
        Schedule::new(
            schedule
                .slots()
                .iter()
                .map(|slot| slot.iter().copied().filter(|&j| j < self.original_n).collect())
                .collect(),
        )
    }

    /// Places the dummies into spare capacity, earliest slot first.
    pub fn lift(&self, schedule: &Schedule) -> Schedule {
        let m = self.instance.machines();
        let mut slots: Vec<Vec<usize>> = schedule.slots().to_vec();
        let mut dummy = self.original_n;
        let total = self.instance.n();
        for slot in &mut slots {
            while slot.len() < m && dummy < total {
                slot.push(dummy);
                dummy += 1;
            }
        }
        Schedule::new(slots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_traits::{One, Zero};
    use alloc::vec;

    #[test]
    fn rejects_structural_violations() {
        let p = vec![ratio(1, 2); 3];
        assert_eq!(
            Instance::testing(1, 2, vec![1, 1, 1], p.clone()),
            Err(InstanceError::Overfull { n: 3, capacity: 2 })
        );
        assert_eq!(
            Instance::testing(4, 1, vec![1, 1, 1], p.clone()),
            Err(InstanceError::TooManyMachines { machines: 4, n: 3 })
        );
        assert_eq!(
            Instance::testing(1, 4, vec![1, 1, 1], p.clone()),
            Err(InstanceError::DeadlineTooLong { deadline: 4, n: 3 })
        );
        assert_eq!(
            Instance::testing(2, 2, vec![1, 1], p.clone()),
            Err(InstanceError::LengthMismatch {
                costs: 2,
                likelihoods: 3
            })
        );
        assert_eq!(
            Instance::testing(2, 2, vec![1, 1, 1], vec![ratio(1, 2), ratio(3, 2), ratio(0, 1)]),
            Err(InstanceError::ProbabilityOutOfRange { test: 1 })
        );
        assert_eq!(
            Instance::<Rational>::search(1, 2, vec![1, 1], vec![0, 0]),
            Err(InstanceError::ZeroTotalWeight)
        );
    }

    #[test]
    fn search_probabilities_are_normalised() {
        let inst = Instance::<Rational>::search(2, 2, vec![1, 2, 3], vec![1, 2, 5]).unwrap();
        let total = (0..3).fold(Rational::zero(), |acc, j| acc + inst.hiding_probability(j));
        assert_eq!(total, Rational::one());
        assert_eq!(inst.survival(&[0, 1]), ratio(5, 8));
    }

    #[test]
    fn padding_appends_dummies() {
        let inst = Instance::testing(2, 2, vec![1, 2, 3], vec![ratio(1, 2); 3]).unwrap();
        let padded = inst.pad_to_full();
        assert_eq!(padded.instance.n(), 4);
        assert_eq!(padded.instance.costs()[3], 0);
        assert_eq!(padded.instance.success_probs().unwrap()[3], Rational::one());
        assert!(padded.is_dummy(3));

        let full = Instance::testing(1, 2, vec![1, 2], vec![ratio(1, 2); 2]).unwrap();
        assert_eq!(full.pad_to_full().instance, full);

        let sched = Schedule::new(vec![vec![0, 1], vec![2]]);
        let lifted = padded.lift(&sched);
        assert_eq!(lifted.slots(), &[vec![0, 1], vec![2, 3]]);
        assert_eq!(padded.project(&lifted), sched);
    }
}
