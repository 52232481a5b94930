#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use tctp_core::{ratio, Instance, Likelihoods, Rational};

/// Random `(n, m, T)` with `m <= n`, `T <= n` and `n <= m * T`.
pub fn random_dims(rng: &mut ChaCha8Rng, min_n: usize, max_n: usize) -> (usize, usize, usize) {
    let n = rng.gen_range(min_n..=max_n);
    let m = rng.gen_range(1..=n);
    let t = rng.gen_range(n.div_ceil(m)..=n);
    (n, m, t)
}

/// Costs in `0..=10`; success probabilities on a grid of twentieths
/// (including 0 and 1), or weights in `0..=20` with a positive total.
pub fn random_instance(rng: &mut ChaCha8Rng, testing: bool, n: usize, m: usize, t: usize) -> Instance {
    let costs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=10)).collect();
    if testing {
        let probs = (0..n).map(|_| ratio(rng.gen_range(0..=20), 20)).collect();
        Instance::testing(m, t, costs, probs).unwrap()
    } else {
        let mut weights: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
        if weights.iter().all(|&w| w == 0) {
            weights[rng.gen_range(0..n)] = 1;
        }
        Instance::search(m, t, costs, weights).unwrap()
    }
}

/// Keeps the first `n` tests, or returns `None` if that is not a valid instance.
pub fn truncate(instance: &Instance, n: usize) -> Option<Instance> {
    let costs = instance.costs()[..n].to_vec();
    let likelihoods = match instance.likelihoods() {
        Likelihoods::Success(p) => Likelihoods::Success(p[..n].to_vec()),
        Likelihoods::Weights(w) => Likelihoods::Weights(w[..n].to_vec()),
    };
    Instance::new(instance.machines(), instance.deadline(), costs, likelihoods).ok()
}

pub fn relative_gap(value: &Rational, optimum: &Rational) -> Rational {
    if optimum == &ratio(0, 1) {
        if value == optimum {
            ratio(0, 1)
        } else {
            ratio(1, 1)
        }
    } else {
        (value - optimum) / optimum
    }
}
