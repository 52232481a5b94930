use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::GenError;
use crate::instance::Instance;
use crate::scalar::{approximate_f64, ratio, Rational, Scalar};

/// The three joint-success-probability ranges of the benchmark design.
pub const Q_RANGES: [(i64, i64, i64); 3] = [(1, 30, 100), (31, 60, 100), (61, 90, 100)];

const COST_STREAM: u64 = 0;
const WEIGHT_STREAM: u64 = 1;
const Q_STREAM: u64 = 2;
/// Resolution at which q is drawn.
const Q_GRID: i64 = 1_000_000;
/// Largest denominator of a generated success probability.
const MAX_DEN: u64 = 1_000_000_000;

/// Parameters of a random instance with `n = m * T` tests.
///
/// Randomness: `ChaCha8Rng::seed_from_u64(seed)`, with stream 0 drawing the
/// costs, stream 1 the weights (the whole vector is redrawn while it sums to
/// zero) and stream 2 the joint success probability `q`, uniform on the
/// grid of multiples of `1e-6` inside `q_range`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub machines: usize,
    pub deadline: usize,
    pub cost_range: (u64, u64),
    pub weight_range: (u64, u64),
    pub q_range: (Rational, Rational),
    pub seed: u64,
}

impl GenConfig {
    pub fn new(machines: usize, deadline: usize, seed: u64) -> Self {
        let (lo, hi, den) = Q_RANGES[2];
        GenConfig {
            machines,
            deadline,
            cost_range: (0, 10),
            weight_range: (0, 1000),
            q_range: (ratio(lo, den), ratio(hi, den)),
            seed,
        }
    }

    fn check(&self) -> Result<(), GenError> {
        let bad = |msg: &str| Err(GenError::InvalidConfig(msg.into()));
        if self.machines == 0 || self.deadline == 0 {
            return bad("m and T must be positive");
        }
        if self.cost_range.0 > self.cost_range.1 {
            return bad("empty cost range");
        }
        if self.weight_range.0 > self.weight_range.1 || self.weight_range.1 == 0 {
            return bad("weight range must be non-empty and allow a positive weight");
        }
        let (lo, hi) = &self.q_range;
        let zero = Rational::from_integer(0.into());
        let one = Rational::from_integer(1.into());
        if lo > hi || *lo < zero || *hi > one {
            return Err(GenError::InvalidConfig(format!("q range [{lo}, {hi}] is not inside [0, 1]")));
        }
        if q_grid(lo, hi).is_none() {
            return bad("q range contains no multiple of 1e-6");
        }
        Ok(())
    }
}

fn q_grid(lo: &Rational, hi: &Rational) -> Option<(i64, i64)> {
    let grid = Rational::from_integer(Q_GRID.into());
    let a = (lo * &grid).ceil().to_integer();
    let b = (hi * &grid).floor().to_integer();
    let (a, b) = (i64::try_from(a).ok()?, i64::try_from(b).ok()?);
    (a <= b).then_some((a, b))
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Draws a random testing instance (`testing = true`) or search instance.
///
/// Testing probabilities spread `q` over the tests as `p_j = q^(w_j/w(N))`,
/// each rounded to the nearest fraction with denominator at most `1e9`. If
/// the rounded product leaves `q_range`, the test of largest weight is
/// rescaled so that the product is exactly `q`.
pub fn gen_random(config: &GenConfig, testing: bool) -> Result<Instance<Rational>, GenError> {
    config.check()?;
    let n = config.machines * config.deadline;

    let mut rng = stream(config.seed, COST_STREAM);
    let costs: Vec<u64> = (0..n)
        .map(|_| rng.gen_range(config.cost_range.0..=config.cost_range.1))
        .collect();

    let mut rng = stream(config.seed, WEIGHT_STREAM);
    let weights = loop {
        let w: Vec<u64> = (0..n)
            .map(|_| rng.gen_range(config.weight_range.0..=config.weight_range.1))
            .collect();
        if w.iter().any(|&x| x > 0) {
            break w;
        }
    };

    let build = |result: Result<Instance<Rational>, _>| result.map_err(|e| GenError::InvalidConfig(format!("{e}")));
    if !testing {
        return build(Instance::search(config.machines, config.deadline, costs, weights));
    }

    let (lo, hi) = &config.q_range;
    let (a, b) = q_grid(lo, hi).expect("checked");
    let mut rng = stream(config.seed, Q_STREAM);
    let q = ratio(rng.gen_range(a..=b), Q_GRID);
    let total: u64 = weights.iter().sum();
    let qf = q.to_f64();
    let mut probs: Vec<Rational> = weights
        .iter()
        .map(|&w| {
            if w == 0 {
                ratio(1, 1)
            } else {
                approximate_f64(libm::pow(qf, w as f64 / total as f64), MAX_DEN)
            }
        })
        .collect();
    let product = probs.iter().fold(ratio(1, 1), |acc, p| acc * p);
    if product < *lo || product > *hi {
        let heaviest = (0..n).max_by(|&x, &y| weights[x].cmp(&weights[y]).then(y.cmp(&x))).expect("n > 0");
        let rest = probs
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != heaviest)
            .fold(ratio(1, 1), |acc, (_, p)| acc * p);
        probs[heaviest] = if rest.numer().is_zero() {
            ratio(0, 1)
        } else {
            (&q / &rest).min(ratio(1, 1))
        };
    }
    build(Instance::testing(config.machines, config.deadline, costs, probs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig::new(2, 3, 42);
        assert_eq!(gen_random(&cfg, true).unwrap(), gen_random(&cfg, true).unwrap());
        assert_eq!(gen_random(&cfg, false).unwrap(), gen_random(&cfg, false).unwrap());
        let other = GenConfig { seed: 43, ..cfg.clone() };
        assert_ne!(gen_random(&cfg, true).unwrap(), gen_random(&other, true).unwrap());
    }

    #[test]
    fn product_lands_in_range() {
        for seed in 0..50 {
            for &(lo, hi, den) in &Q_RANGES {
                let mut cfg = GenConfig::new(3, 2, seed);
                cfg.q_range = (ratio(lo, den), ratio(hi, den));
                let inst = gen_random(&cfg, true).unwrap();
                let q = inst.success_probs().unwrap().iter().fold(ratio(1, 1), |a, p| a * p);
                assert!(q >= cfg.q_range.0 && q <= cfg.q_range.1, "seed {seed}: {q}");
                assert!(inst.costs().iter().all(|&c| c <= 10));
            }
        }
    }

    #[test]
    fn rejects_bad_config() {
        let mut cfg = GenConfig::new(2, 2, 0);
        cfg.weight_range = (0, 0);
        assert!(gen_random(&cfg, false).is_err());
        let mut cfg = GenConfig::new(2, 2, 0);
        cfg.q_range = (ratio(1, 2), ratio(1, 3));
        assert!(gen_random(&cfg, true).is_err());
    }
}
