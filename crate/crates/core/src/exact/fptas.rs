use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::dp::{best_budget, budget_of, split, Knapsack};
use super::ExactError;
use crate::instance::{Instance, Likelihoods, Padded};
use crate::objective::evaluate_slots;
use crate::report::{Method, SolveReport, Status};
use crate::scalar::{Rational, Scalar};
use crate::schedule::Schedule;

struct Candidate<P> {
    objective: P,
    first_cost: u64,
    schedule: Schedule,
}

impl<P: Scalar> Candidate<P> {
    fn beats(&self, other: &Candidate<P>) -> bool {
        self.objective
            .cmp(&other.objective)
            .then(self.first_cost.cmp(&other.first_cost))
            .then_with(|| self.schedule.canonical().cmp(&other.schedule.canonical()))
            == Ordering::Less
    }
}

/// Two-slot schedule within a factor `1 + eps` of the optimum.
///
/// Tests are ordered by cost descending. For every position `i` with positive cost the costs are rounded
/// down to multiples of `eps * c_i / n` and the dynamic program is run over
/// positions `i..n`; every resulting schedule is scored with the original
/// costs. A first slot made only of zero-cost tests is tried separately.
pub fn fptas_two_slots<P: Scalar>(instance: &Instance<P>, eps: &Rational) -> Result<SolveReport<P>, ExactError> {
    if !eps.is_positive() {
        return Err(ExactError::NonPositiveEpsilon);
    }
    if instance.deadline() != 2 {
        return Err(ExactError::DeadlineNotTwo(instance.deadline()));
    }
    let padded = instance.pad_to_full();
    let full = &padded.instance;
    let n = full.n();
    let m = full.machines();

    // Cost descending; among equal costs the larger p_j (testing) or w_j
    // (search) comes first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let likelier = match full.likelihoods() {
            Likelihoods::Success(p) => p[b].cmp(&p[a]),
            Likelihoods::Weights(w) => w[b].cmp(&w[a]),
        };
        full.costs()[b].cmp(&full.costs()[a]).then(likelier).then(a.cmp(&b))
    });

    let mut best: Option<Candidate<P>> = None;
    let mut offer = |first: Vec<usize>| {
        let schedule = split(&padded, first);
        let candidate = Candidate {
            objective: evaluate_slots(instance, schedule.slots()),
            first_cost: instance.set_cost(&schedule.slots()[0]),
            schedule,
        };
        if best.as_ref().map_or(true, |b| candidate.beats(b)) {
            best = Some(candidate);
        }
    };

    if let Some(first) = zero_cost_slot(&padded) {
        offer(first);
    }

    let (num, den) = (eps.numer().clone(), eps.denom().clone());
    for i in 0..n {
        let ci = full.costs()[order[i]];
        if ci == 0 {
            continue;
        }
        // c'_j = floor(c_j / mu) with mu = eps * c_i / n
        let divisor = &num * BigInt::from(ci);
        let rounded: Vec<u128> = order
            .iter()
            .map(|&j| {
                let scaled = BigInt::from(full.costs()[j]) * BigInt::from(n) * &den;
                scaled.div_floor(&divisor).to_u128().expect("rounded cost fits u128")
            })
            .collect();
        let budget = budget_of(rounded[i..].iter().sum())?;
        let total: u128 = rounded.iter().sum();
        let costs: Vec<usize> = rounded
            .iter()
            .enumerate()
            .map(|(k, &c)| if k >= i { c as usize } else { usize::MAX })
            .collect();
        let first = match full.likelihoods() {
            Likelihoods::Success(p) => {
                let table = Knapsack::run(
                    costs,
                    i,
                    m,
                    budget,
                    P::one(),
                    |v, k| v.clone() * p[order[k]].clone(),
                    |a, b| a < b,
                );
                let objective = |b: usize, v: &P| big::<P>(b as u128) + v.clone() * big::<P>(total - b as u128);
                best_budget(&table, objective).map(|b| table.reconstruct(b))
            }
            Likelihoods::Weights(w) => {
                let weight_total = full.total_weight();
                let table = Knapsack::run(costs, i, m, budget, 0u64, |v, k| v + w[order[k]], |a, b| a > b);
                let objective = |b: usize, v: &u64| {
                    big::<P>(b as u128)
                        + big::<P>(total - b as u128) * P::from_u64(weight_total - v) / P::from_u64(weight_total)
                };
                best_budget(&table, objective).map(|b| table.reconstruct(b))
            }
        };
        if let Some(positions) = first {
            offer(positions.into_iter().map(|k| order[k]).collect());
        }
    }

    let best = best.expect("padded two-slot instance has a candidate");
    Ok(SolveReport::new(
        best.schedule,
        best.objective,
        Method::Fptas,
        Status::ApproxWithFactor(eps.clone()),
    ))
}

fn big<P: Scalar>(value: u128) -> P {
    P::from_rational(&Rational::from_integer(BigInt::from(value)))
}

/// The `m` zero-cost tests least likely to pass, if there are that many.
fn zero_cost_slot<P: Scalar>(padded: &Padded<P>) -> Option<Vec<usize>> {
    let full = &padded.instance;
    let mut zero: Vec<usize> = (0..full.n()).filter(|&j| full.costs()[j] == 0).collect();
    if zero.len() < full.machines() {
        return None;
    }
    zero.sort_by(|&a, &b| full.pass_probability(a).cmp(&full.pass_probability(b)).then(a.cmp(&b)));
    zero.truncate(full.machines());
    Some(zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{brute_force_optimum, DEFAULT_NODE_LIMIT};
    use crate::scalar::ratio;
    use alloc::vec;

    #[test]
    fn within_factor_on_two_tests() {
        let inst = Instance::testing(1, 2, vec![3, 1], vec![ratio(1, 2), ratio(1, 3)]).unwrap();
        let rep = fptas_two_slots(&inst, &ratio(1, 2)).unwrap();
        assert!(rep.objective <= ratio(3, 1));
        assert_eq!(rep.status, Status::ApproxWithFactor(ratio(1, 2)));
    }

    #[test]
    fn lossless_rounding_is_exact() {
        let inst = Instance::testing(
            2,
            2,
            vec![4, 4, 2, 2],
            vec![ratio(1, 3), ratio(3, 4), ratio(1, 5), ratio(2, 3)],
        )
        .unwrap();
        let opt = brute_force_optimum(&inst, DEFAULT_NODE_LIMIT).unwrap().objective;
        let rep = fptas_two_slots(&inst, &ratio(1, 13)).unwrap();
        assert_eq!(rep.objective, opt);
    }

    #[test]
    fn rejects_non_positive_epsilon() {
        let inst = Instance::testing(1, 2, vec![3, 1], vec![ratio(1, 2), ratio(1, 3)]).unwrap();
        assert!(matches!(
            fptas_two_slots(&inst, &ratio(0, 1)),
            Err(ExactError::NonPositiveEpsilon)
        ));
    }

    #[test]
    fn all_zero_costs() {
        let inst = Instance::testing(2, 2, vec![0, 0, 0, 0], vec![ratio(1, 2); 4]).unwrap();
        let rep = fptas_two_slots(&inst, &ratio(1, 10)).unwrap();
        assert_eq!(rep.objective, ratio(0, 1));
    }
}
