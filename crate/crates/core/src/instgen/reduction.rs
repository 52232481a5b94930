use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use super::GenError;
use crate::enumerate::{for_each_schedule, schedule_count};
use crate::instance::Instance;
use crate::objective::evaluate_slots;
use crate::scalar::Rational;
use crate::schedule::Schedule;

/// Constants of the search-to-testing reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    /// Smallest `W` with every `pi_j * W` integral: `w(N) / gcd(w)`.
    pub w_scale: u64,
    /// `M = max(c(N), 1) * (n W)^2`.
    pub big_m: BigInt,
    /// `ceil((c(N) - alpha) W)`.
    pub gamma: BigInt,
    /// `c(N) - (gamma - 1) / M`.
    pub beta: Rational,
    pub alpha: Rational,
}

/// Testing instance with `p_j = 1 - pi_j W / M`, same `m`, `T` and costs,
/// such that a search schedule costs at most `alpha` exactly when the same
/// schedule costs less than `beta` in the testing instance.
pub fn reduce_search_to_testing(
    search: &Instance<Rational>,
    alpha: &Rational,
) -> Result<(Instance<Rational>, ReductionParams), GenError> {
    let weights = search.weights().ok_or(GenError::NotSearch)?;
    if alpha.is_negative() {
        return Err(GenError::NegativeAlpha);
    }
    let g = weights.iter().fold(0u64, |acc, &w| acc.gcd(&w));
    let w_scale = search.total_weight() / g;
    let cost_total = BigInt::from(search.total_cost());
    let nw = BigInt::from(search.n()) * BigInt::from(w_scale);
    let big_m = cost_total.clone().max(BigInt::one()) * &nw * &nw;
    let gamma = ((Rational::from_integer(cost_total.clone()) - alpha) * Rational::from_integer(BigInt::from(w_scale)))
        .ceil()
        .to_integer();
    let beta = Rational::from_integer(cost_total) - Rational::new(&gamma - BigInt::one(), big_m.clone());
    let probs: Vec<Rational> = weights
        .iter()
        .map(|&w| Rational::one() - Rational::new(BigInt::from(w / g), big_m.clone()))
        .collect();
    let testing = Instance::testing(search.machines(), search.deadline(), search.costs().to_vec(), probs)
        .map_err(|e| GenError::InvalidConfig(alloc::format!("{e}")))?;
    Ok((
        testing,
        ReductionParams {
            w_scale,
            big_m,
            gamma,
            beta,
            alpha: alpha.clone(),
        },
    ))
}

/// Outcome of comparing both decision questions on every schedule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionCheck {
    pub schedules: u64,
    pub agreements: u64,
    pub counterexamples: Vec<Schedule>,
}

impl ReductionCheck {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// Enumerates every ordered schedule and checks
/// `search cost <= alpha  <=>  testing cost < beta`.
pub fn check_reduction(search: &Instance<Rational>, alpha: &Rational, limit: u128) -> Result<ReductionCheck, GenError> {
    let (testing, params) = reduce_search_to_testing(search, alpha)?;
    let count = schedule_count(search.n(), search.machines(), search.deadline());
    if count > limit {
        return Err(GenError::TooManySchedules { count, limit });
    }
    let mut check = ReductionCheck {
        schedules: 0,
        agreements: 0,
        counterexamples: Vec::new(),
    };
    for_each_schedule(search.n(), search.machines(), search.deadline(), |slots| {
        let search_ok = evaluate_slots(search, slots) <= *alpha;
        let testing_ok = evaluate_slots(&testing, slots) < params.beta;
        check.schedules += 1;
        if search_ok == testing_ok {
            check.agreements += 1;
        } else {
            check.counterexamples.push(Schedule::new(slots.to_vec()));
        }
    });
    Ok(check)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use alloc::vec;

    fn worked() -> Instance<Rational> {
        Instance::search(1, 2, vec![1, 2], vec![1, 1]).unwrap()
    }

    #[test]
    fn worked_example_constants() {
        let (testing, params) = reduce_search_to_testing(&worked(), &ratio(2, 1)).unwrap();
        assert_eq!(params.w_scale, 2);
        assert_eq!(params.big_m, BigInt::from(48));
        assert_eq!(params.gamma, BigInt::from(2));
        assert_eq!(params.beta, ratio(143, 48));
        let first = [vec![0], vec![1]];
        let second = [vec![1], vec![0]];
        assert_eq!(evaluate_slots(&testing, &first), ratio(142, 48));
        assert_eq!(evaluate_slots(&testing, &second), ratio(143, 48));
        assert_eq!(evaluate_slots(&worked(), &first), ratio(2, 1));
        assert_eq!(evaluate_slots(&worked(), &second), ratio(5, 2));
        let check = check_reduction(&worked(), &ratio(2, 1), 100).unwrap();
        assert_eq!((check.schedules, check.agreements), (2, 2));
    }

    #[test]
    fn vacuous_threshold() {
        let (_, params) = reduce_search_to_testing(&worked(), &ratio(3, 1)).unwrap();
        assert_eq!(params.gamma, BigInt::from(0));
        assert_eq!(params.beta, ratio(3, 1) + ratio(1, 48));
        assert!(check_reduction(&worked(), &ratio(3, 1), 100).unwrap().holds());
    }

    #[test]
    fn rejects_testing_input() {
        let inst = Instance::testing(1, 1, vec![1], vec![ratio(1, 2)]).unwrap();
        assert_eq!(reduce_search_to_testing(&inst, &ratio(1, 1)), Err(GenError::NotSearch));
    }
}
