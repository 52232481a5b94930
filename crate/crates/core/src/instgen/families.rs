use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Pow;

use super::GenError;
use crate::instance::Instance;
use crate::radical::{Radical, RadicalField};
use crate::scalar::{ratio, Rational};
use crate::schedule::Schedule;

/// Three tests on two machines and two slots where the ratio greedy pays
/// `M - 1/M`: `c = (1, 0, M)`, `p = (1/M, 1 - 1/M, 1 - 1/M)`.
pub fn gen_greedy_gap(big_m: u64) -> Result<Instance<Rational>, GenError> {
    if big_m < 2 {
        return Err(GenError::GreedyGapM(big_m));
    }
    let m = i64::try_from(big_m).map_err(|_| GenError::GreedyGapM(big_m))?;
    let high = ratio(m - 1, m);
    Instance::testing(2, 2, vec![1, 0, big_m], vec![ratio(1, m), high.clone(), high])
        .map_err(|e| GenError::InvalidConfig(alloc::format!("{e}")))
}

/// Instance with a local optimum far from the global one.
#[derive(Clone, Debug)]
pub struct LocalityGap {
    pub instance: Instance<Radical>,
    /// The cost parameter `M` of the tests in `I_2`.
    pub big_m: u64,
    /// `(I_1, {i*} + I_2)`, locally optimal with value `k (c - 1) + 1`.
    pub local: Schedule,
    /// `({i*}, I_1 + I_2)`, globally optimal with value `c`.
    pub global: Schedule,
}

/// Smallest `M >= 1` with `(c^2 + ckM)^k <= (2c - 1 + kM)^k (c + kM)`.
pub fn locality_gap_m(c: u64, k: u32) -> u64 {
    let admissible = |m: u64| {
        let km = BigUint::from(k) * BigUint::from(m);
        let c = BigUint::from(c);
        let lhs = Pow::pow(&c * &c + &c * &km, k);
        let rhs = Pow::pow(&c * 2u32 - 1u32 + &km, k) * (&c + &km);
        lhs <= rhs
    };
    (1..).find(|&m| admissible(m)).expect("the inequality holds for large M")
}

/// `m = 2k` machines, `T = 2`, `n = 2k + 1` tests:
/// `I_1` (k tests, cost `c - 1`, `p = (c + kM)^(-1/k)`), `I_2` (k tests,
/// cost `M`, `p = 1`) and `i*` (cost `c`, `p = 0`). The irrational `p` is
/// kept exact as a radical.
pub fn gen_locality_gap(c: u64, k: u32) -> Result<LocalityGap, GenError> {
    if c < 2 || k < 2 {
        return Err(GenError::LocalityGapParams { c, k });
    }
    let big_m = locality_gap_m(c, k);
    let k_us = k as usize;
    let radicand = BigUint::from(c) + BigUint::from(k) * BigUint::from(big_m);
    let p = RadicalField::new(radicand, k).generator();
    let mut costs = Vec::with_capacity(2 * k_us + 1);
    let mut probs = Vec::with_capacity(2 * k_us + 1);
    for _ in 0..k_us {
        costs.push(c - 1);
        probs.push(p.clone());
    }
    for _ in 0..k_us {
        costs.push(big_m);
        probs.push(Radical::constant(ratio(1, 1)));
    }
    costs.push(c);
    probs.push(Radical::constant(ratio(0, 1)));
    let instance = Instance::testing(2 * k_us, 2, costs, probs)
        .map_err(|e| GenError::InvalidConfig(alloc::format!("{e}")))?;
    let i1: Vec<usize> = (0..k_us).collect();
    let star = 2 * k_us;
    let mut second: Vec<usize> = vec![star];
    second.extend(k_us..2 * k_us);
    let local = Schedule::new(vec![i1, second]);
    let global = Schedule::new(vec![vec![star], (0..2 * k_us).collect()]);
    Ok(LocalityGap {
        instance,
        big_m,
        local,
        global,
    })
}
