use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;

use tctp_core::exact::{brute_force_optimum, dp_two_slots, fptas_two_slots, DEFAULT_NODE_LIMIT};
use tctp_core::heuristics::{find_improving_move, greedy_min_ratio, multi_start, Partition, DEFAULT_SUBSET_CAP};
use tctp_core::instgen::check_reduction;
use tctp_core::mip::{build, emit_lp, parse_lp, point_to_schedule, schedule_to_point, verify_point, Formulation};
use tctp_core::scalar::{exact_decimal, parse_decimal};
use tctp_core::{evaluate, global_bounds, ratio, sort_by_ratio, validate, Instance, Likelihoods, Rational, Schedule};

fn instance(max_n: usize, testing: Option<bool>) -> impl Strategy<Value = Instance> {
    let variant = match testing {
        Some(t) => Just(t).boxed(),
        None => any::<bool>().boxed(),
    };
    (1..=max_n, variant)
        .prop_flat_map(|(n, testing)| (Just(n), 1..=n, Just(testing)))
        .prop_flat_map(|(n, m, testing)| {
            (
                Just(m),
                n.div_ceil(m)..=n,
                vec(0u64..=10, n),
                vec(0i64..=20, n),
                vec(0u64..=20, n),
                Just(testing),
            )
        })
        .prop_map(|(m, t, costs, p, mut w, testing)| {
            if testing {
                Instance::testing(m, t, costs, p.into_iter().map(|k| ratio(k, 20)).collect()).unwrap()
            } else {
                if w.iter().all(|&x| x == 0) {
                    w[0] = 1;
                }
                Instance::search(m, t, costs, w).unwrap()
            }
        })
}

fn two_slot_instance(max_m: usize) -> impl Strategy<Value = Instance> {
    (1..=max_m, any::<bool>())
        .prop_flat_map(|(m, testing)| (Just(m), m.max(2)..=2 * m, Just(testing)))
        .prop_flat_map(|(m, n, testing)| (Just(m), vec(0u64..=30, n), vec(0i64..=20, n), vec(0u64..=20, n), Just(testing)))
        .prop_map(|(m, costs, p, mut w, testing)| {
            if testing {
                Instance::testing(m, 2, costs, p.into_iter().map(|k| ratio(k, 20)).collect()).unwrap()
            } else {
                if w.iter().all(|&x| x == 0) {
                    w[0] = 1;
                }
                Instance::search(m, 2, costs, w).unwrap()
            }
        })
}

/// Places tests one at a time into a slot chosen by `keys` among those with room.
fn place(inst: &Instance, keys: &[usize]) -> Schedule {
    let mut slots = vec![Vec::new(); inst.deadline()];
    for (j, key) in keys.iter().enumerate() {
        let open: Vec<usize> = (0..inst.deadline()).filter(|&s| slots[s].len() < inst.machines()).collect();
        slots[open[key % open.len()]].push(j);
    }
    Schedule::new(slots)
}

fn with_schedule(max_n: usize, testing: Option<bool>) -> impl Strategy<Value = (Instance, Schedule)> {
    instance(max_n, testing).prop_flat_map(|inst| {
        let n = inst.n();
        (Just(inst), vec(any::<usize>(), n)).prop_map(|(inst, keys)| {
            let s = place(&inst, &keys);
            (inst, s)
        })
    })
}

/// Direct evaluation from the definition: each slot pays its cost times the
/// probability that nothing earlier ended the process.
fn naive(inst: &Instance, s: &Schedule) -> Rational {
    let mut total = Rational::zero();
    let mut earlier: Vec<usize> = Vec::new();
    for slot in s.slots() {
        let reach = match inst.likelihoods() {
            Likelihoods::Success(p) => earlier.iter().fold(Rational::one(), |acc, &j| acc * &p[j]),
            Likelihoods::Weights(w) => {
                let total_w: u64 = w.iter().sum();
                let seen: u64 = earlier.iter().map(|&j| w[j]).sum();
                ratio((total_w - seen) as i64, total_w as i64)
            }
        };
        let cost: u64 = slot.iter().map(|&j| inst.costs()[j]).sum();
        total += reach * Rational::from_integer(cost.into());
        earlier.extend(slot);
    }
    total
}

fn oracle(inst: &Instance) -> Rational {
    brute_force_optimum(inst, DEFAULT_NODE_LIMIT).unwrap().objective
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluation_matches_the_definition((inst, s) in with_schedule(8, None)) {
        prop_assert_eq!(evaluate(&inst, &s).unwrap(), naive(&inst, &s));
    }

    #[test]
    fn ratio_sort_never_hurts((inst, s) in with_schedule(8, None)) {
        let sorted = sort_by_ratio(&inst, &s).unwrap();
        prop_assert!(validate(&inst, &sorted).is_ok());
        prop_assert!(evaluate(&inst, &sorted).unwrap() <= evaluate(&inst, &s).unwrap());
    }

    #[test]
    fn cost_scaling_is_linear((inst, s) in with_schedule(8, None), k in 0u64..50) {
        let scaled = inst.scale_costs(k);
        let k = Rational::from_integer(k.into());
        prop_assert_eq!(evaluate(&scaled, &s).unwrap(), evaluate(&inst, &s).unwrap() * k);
    }

    #[test]
    fn padding_preserves_values((inst, s) in with_schedule(8, None)) {
        let padded = inst.pad_to_full();
        let lifted = padded.lift(&s);
        prop_assert!(validate(&padded.instance, &lifted).is_ok());
        prop_assert_eq!(evaluate(&padded.instance, &lifted).unwrap(), evaluate(&inst, &s).unwrap());
        prop_assert_eq!(padded.project(&lifted), s);
    }

    #[test]
    fn hiding_probabilities_sum_to_one(inst in instance(10, Some(false))) {
        let total = (0..inst.n()).fold(Rational::zero(), |acc, j| acc + inst.hiding_probability(j));
        prop_assert_eq!(total, Rational::one());
    }

    #[test]
    fn decimals_round_trip(num in -100_000i64..100_000, e2 in 0u32..8, e5 in 0u32..8) {
        let v = ratio(num, 2i64.pow(e2) * 5i64.pow(e5));
        let text = exact_decimal(&v).unwrap();
        prop_assert_eq!(parse_decimal(&text), Some(v));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn oracle_is_a_lower_bound_for_every_schedule((inst, s) in with_schedule(7, None)) {
        let best = brute_force_optimum(&inst, DEFAULT_NODE_LIMIT).unwrap();
        prop_assert!(validate(&inst, &best.schedule).is_ok());
        prop_assert_eq!(evaluate(&inst, &best.schedule).unwrap(), best.objective.clone());
        prop_assert!(best.objective <= evaluate(&inst, &s).unwrap());
        let bounds = global_bounds(&inst);
        prop_assert!(bounds.lower <= best.objective && best.objective <= bounds.upper);
    }

    #[test]
    fn product_bound_on_the_optimum((inst, s) in with_schedule(7, Some(true))) {
        let all: Vec<usize> = (0..inst.n()).collect();
        prop_assert!(oracle(&inst) >= evaluate(&inst, &s).unwrap() * inst.survival(&all));
    }

    #[test]
    fn two_slot_dp_is_exact(inst in two_slot_instance(5)) {
        let report = dp_two_slots(&inst).unwrap();
        prop_assert!(validate(&inst, &report.schedule).is_ok());
        prop_assert_eq!(evaluate(&inst, &report.schedule).unwrap(), report.objective.clone());
        prop_assert_eq!(report.objective, oracle(&inst));
    }

    #[test]
    fn fptas_meets_its_factor(inst in two_slot_instance(5), den in 1i64..20) {
        let eps = ratio(1, den);
        let report = fptas_two_slots(&inst, &eps).unwrap();
        prop_assert!(validate(&inst, &report.schedule).is_ok());
        prop_assert!(report.objective <= (Rational::one() + eps) * oracle(&inst));
    }

    #[test]
    fn heuristics_return_valid_schedules(inst in instance(7, None)) {
        let opt = oracle(&inst);
        let greedy = greedy_min_ratio(&inst, DEFAULT_SUBSET_CAP).unwrap();
        prop_assert!(validate(&inst, &greedy.schedule).is_ok());
        prop_assert!(greedy.objective >= opt);
        let ls = multi_start(&inst);
        prop_assert!(validate(&inst, &ls.schedule).is_ok());
        prop_assert_eq!(evaluate(&inst, &ls.schedule).unwrap(), ls.objective.clone());
        prop_assert!(ls.objective >= opt);
        prop_assert!(find_improving_move(&inst, &Partition::from_schedule(&ls.schedule)).is_none());
    }

    #[test]
    fn schedule_points_are_feasible((inst, s) in with_schedule(5, None), po in any::<bool>()) {
        let formulation = if po { Formulation::PartialOrder } else { Formulation::Assignment };
        let model = build(formulation, &inst).unwrap();
        let point = schedule_to_point(&model, &inst, &s).unwrap();
        let check = verify_point(&model, &point).unwrap();
        prop_assert!(check.feasible, "{:?}", check.violations);
        prop_assert_eq!(check.objective, evaluate(&inst, &s).unwrap());
        let back = point_to_schedule(&model, &point).unwrap();
        prop_assert_eq!(evaluate(&inst, &back).unwrap(), evaluate(&inst, &s).unwrap());
    }

    #[test]
    fn lp_text_round_trips(inst in instance(5, None), po in any::<bool>()) {
        let formulation = if po { Formulation::PartialOrder } else { Formulation::Assignment };
        let text = emit_lp(&build(formulation, &inst).unwrap());
        prop_assert_eq!(emit_lp(&parse_lp(&text).unwrap()), text);
    }

    #[test]
    fn reduction_agrees_on_every_schedule(inst in instance(5, Some(false)), k in 0i64..=10) {
        let mut values = Vec::new();
        tctp_core::enumerate::for_each_schedule(inst.n(), inst.machines(), inst.deadline(), |slots| {
            values.push(evaluate(&inst, &Schedule::new(slots.to_vec())).unwrap());
        });
        let min = values.iter().min().unwrap().clone();
        let max = values.iter().max().unwrap().clone();
        let alpha = &min + (max - &min) * ratio(k, 10);
        prop_assert!(check_reduction(&inst, &alpha, 1_000_000).unwrap().holds());
    }
}
