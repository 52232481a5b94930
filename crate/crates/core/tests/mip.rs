use num_traits::{One, Zero};
use tctp_core::exact::{brute_force_optimum, DEFAULT_NODE_LIMIT};
use tctp_core::mip::{
    add_precedence, add_slot_costs, build, build_assign_search, build_assign_testing, build_po_search,
    build_po_testing, emit_lp, parse_lp, point_to_schedule, schedule_to_point, verify_point, Formulation,
    LinearModel, MipError, Point, VarKind,
};
use tctp_core::{evaluate, ratio, Instance, Rational, Schedule};

fn small_testing() -> Instance {
    Instance::testing(1, 2, vec![3, 1], vec![ratio(1, 2), ratio(1, 3)]).unwrap()
}

fn count_prefix(model: &LinearModel, prefix: &str) -> usize {
    model.variables().iter().filter(|v| v.name.starts_with(prefix)).count()
}

fn zero_point(model: &LinearModel) -> Point {
    model
        .variables()
        .iter()
        .map(|v| (v.name.clone(), Rational::zero()))
        .collect()
}

#[test]
fn po_testing_variable_counts_for_two_tests() {
    let model = build_po_testing(&small_testing()).unwrap();
    assert_eq!(count_prefix(&model, "d_"), 2);
    assert_eq!(count_prefix(&model, "mu_"), 1);
    assert_eq!(count_prefix(&model, "a_"), 6);
    assert_eq!(model.variables().len(), 9);
}

#[test]
fn po_transitivity_count_is_n_falling_three() {
    for n in 3..=5 {
        let inst = Instance::testing(1, n, vec![1; n], vec![ratio(1, 2); n]).unwrap();
        let model = build_po_testing(&inst).unwrap();
        let trans = model.constraints().iter().filter(|c| c.name.starts_with("trans_")).count();
        assert_eq!(trans, n * (n - 1) * (n - 2));
    }
}

#[test]
fn builders_reject_the_wrong_variant() {
    let search = Instance::search(1, 2, vec![1, 2], vec![1, 1]).unwrap();
    assert!(matches!(build_po_testing(&search), Err(MipError::WrongVariant { .. })));
    assert!(matches!(build_assign_testing(&search), Err(MipError::WrongVariant { .. })));
    assert!(matches!(build_po_search(&small_testing()), Err(MipError::WrongVariant { .. })));
    assert!(matches!(build_assign_search(&small_testing()), Err(MipError::WrongVariant { .. })));
}

#[test]
fn assignment_point_matches_hand_value() {
    let inst = small_testing();
    let model = build_assign_testing(&inst).unwrap();
    let sigma = Schedule::new(vec![vec![1], vec![0]]);
    let point = schedule_to_point(&model, &inst, &sigma).unwrap();
    let check = verify_point(&model, &point).unwrap();
    assert!(check.feasible, "{:?}", check.violations);
    assert_eq!(check.objective, ratio(2, 1));
}

#[test]
fn slot_costs_add_tight_slot_indicators() {
    let inst = small_testing();
    let base = build_assign_testing(&inst).unwrap();
    let model = add_slot_costs(&base, &[ratio(1, 1), ratio(1, 1)]).unwrap();
    let sigma = Schedule::new(vec![vec![1], vec![0]]);
    let point = schedule_to_point(&model, &inst, &sigma).unwrap();
    assert_eq!(point["u_1"], Rational::one());
    assert_eq!(point["u_2"], ratio(1, 3));
    let check = verify_point(&model, &point).unwrap();
    assert!(check.feasible, "{:?}", check.violations);
    assert_eq!(check.objective, ratio(2, 1) + ratio(4, 3));
}

#[test]
fn zero_slot_costs_leave_objectives_unchanged() {
    let inst = Instance::testing(2, 2, vec![3, 1, 4], vec![ratio(1, 2), ratio(1, 3), ratio(3, 4)]).unwrap();
    let base = build_assign_testing(&inst).unwrap();
    let model = add_slot_costs(&base, &[Rational::zero(), Rational::zero()]).unwrap();
    let sigma = Schedule::new(vec![vec![2], vec![0, 1]]);
    let a = verify_point(&base, &schedule_to_point(&base, &inst, &sigma).unwrap()).unwrap();
    let b = verify_point(&model, &schedule_to_point(&model, &inst, &sigma).unwrap()).unwrap();
    assert!(a.feasible && b.feasible);
    assert_eq!(a.objective, b.objective);
    assert!(matches!(
        add_slot_costs(&base, &[ratio(-1, 1), Rational::zero()]),
        Err(MipError::NegativeSlotCost)
    ));
}

#[test]
fn single_slot_slot_cost_is_charged_once() {
    let inst = Instance::testing(2, 1, vec![3, 1], vec![ratio(1, 2), ratio(1, 3)]).unwrap();
    let model = add_slot_costs(&build_assign_testing(&inst).unwrap(), &[ratio(5, 1)]).unwrap();
    let point = schedule_to_point(&model, &inst, &Schedule::new(vec![vec![0, 1]])).unwrap();
    assert_eq!(point["u_1"], Rational::one());
    let check = verify_point(&model, &point).unwrap();
    assert!(check.feasible);
    assert_eq!(check.objective, ratio(4 + 5, 1));
}

#[test]
fn all_zero_assignment_point_violates_every_assignment_row() {
    let inst = Instance::testing(2, 2, vec![3, 1, 4], vec![ratio(1, 2), ratio(1, 3), ratio(3, 4)]).unwrap();
    let model = build_assign_testing(&inst).unwrap();
    let check = verify_point(&model, &zero_point(&model)).unwrap();
    assert!(!check.feasible);
    for j in 1..=3 {
        let name = format!("assign_{j}");
        let v = check.violations.iter().find(|v| v.name == name).expect("assignment violation");
        assert_eq!(v.slack, ratio(-1, 1));
    }
}

#[test]
fn contradictory_precedences_violate_the_order_row() {
    let inst = small_testing();
    let model = build_po_testing(&inst).unwrap();
    let mut point = schedule_to_point(&model, &inst, &Schedule::new(vec![vec![0], vec![1]])).unwrap();
    point.insert("d_2_1".into(), Rational::one());
    let check = verify_point(&model, &point).unwrap();
    assert!(check.violations.iter().any(|v| v.name == "order_1_2"));
}

#[test]
fn missing_variables_are_reported() {
    let model = build_po_testing(&small_testing()).unwrap();
    let mut point = zero_point(&model);
    point.remove("mu_1_2");
    assert!(verify_point(&model, &point).is_err());
}

#[test]
fn precedence_chain_leaves_one_feasible_order() {
    let inst = Instance::testing(1, 3, vec![2, 5, 1], vec![ratio(1, 2), ratio(2, 3), ratio(1, 5)]).unwrap();
    let base = build_po_testing(&inst).unwrap();
    assert_eq!(add_precedence(&base, &[]).unwrap().constraints(), base.constraints());
    let model = add_precedence(&base, &[(0, 1), (1, 2)]).unwrap();
    let mut feasible = Vec::new();
    tctp_core::enumerate::for_each_schedule(3, 1, 3, |slots| {
        let s = Schedule::new(slots.to_vec());
        let check = verify_point(&model, &schedule_to_point(&model, &inst, &s).unwrap()).unwrap();
        if check.feasible {
            feasible.push((s, check.objective));
        }
    });
    assert_eq!(feasible.len(), 1);
    let identity = Schedule::new(vec![vec![0], vec![1], vec![2]]);
    assert_eq!(feasible[0].0, identity);
    assert_eq!(feasible[0].1, evaluate(&inst, &identity).unwrap());

    assert!(matches!(
        add_precedence(&base, &[(0, 1), (1, 0)]),
        Err(MipError::CyclicPrecedence(_))
    ));
}

#[test]
fn single_search_location_has_unit_survival() {
    let inst = Instance::search(1, 1, vec![7], vec![3]).unwrap();
    let model = build_po_search(&inst).unwrap();
    let point = schedule_to_point(&model, &inst, &Schedule::new(vec![vec![0]])).unwrap();
    assert_eq!(point["a_1"], Rational::one());
    assert_eq!(verify_point(&model, &point).unwrap().objective, ratio(7, 1));

    let inst = Instance::search(2, 2, vec![1, 2, 3], vec![1, 2, 5]).unwrap();
    let model = build_assign_search(&inst).unwrap();
    let point = schedule_to_point(&model, &inst, &Schedule::new(vec![vec![2], vec![0, 1]])).unwrap();
    assert_eq!(point["zt_1"], Rational::one());
}

#[test]
fn every_schedule_maps_to_a_feasible_point_with_its_value() {
    let instances = vec![
        Instance::testing(2, 2, vec![3, 0, 4], vec![ratio(1, 2), ratio(1, 3), ratio(3, 4)]).unwrap(),
        Instance::testing(1, 3, vec![1, 2, 3], vec![ratio(0, 1), ratio(1, 1), ratio(2, 5)]).unwrap(),
        Instance::search(2, 2, vec![5, 1, 2, 2], vec![1, 0, 4, 3]).unwrap(),
        Instance::search(3, 1, vec![5, 1, 2], vec![1, 2, 3]).unwrap(),
    ];
    for inst in &instances {
        for formulation in [Formulation::PartialOrder, Formulation::Assignment] {
            let model = build(formulation, inst).unwrap();
            let mut best: Option<Rational> = None;
            tctp_core::enumerate::for_each_schedule(inst.n(), inst.machines(), inst.deadline(), |slots| {
                let s = Schedule::new(slots.to_vec());
                let point = schedule_to_point(&model, inst, &s).unwrap();
                let check = verify_point(&model, &point).unwrap();
                assert!(check.feasible, "{s}: {:?}", check.violations);
                let value = evaluate(inst, &s).unwrap();
                assert_eq!(check.objective, value, "{s}");
                assert_eq!(evaluate(inst, &point_to_schedule(&model, &point).unwrap()).unwrap(), value);
                if best.as_ref().map_or(true, |b| value < *b) {
                    best = Some(value);
                }
            });
            let oracle = brute_force_optimum(inst, DEFAULT_NODE_LIMIT).unwrap();
            assert_eq!(best.unwrap(), oracle.objective);
        }
    }
}

#[test]
fn empty_objective_is_written_as_zero() {
    let text = emit_lp(&LinearModel::new());
    assert!(text.starts_with("Minimize\n obj: 0\n"));
}

#[test]
fn emission_round_trips() {
    let testing = Instance::testing(2, 2, vec![3, 1, 4], vec![ratio(1, 3), ratio(2, 7), ratio(3, 4)]).unwrap();
    let search = Instance::search(2, 2, vec![3, 1, 4], vec![1, 2, 4]).unwrap();
    let mut models = vec![
        build_po_testing(&testing).unwrap(),
        build_assign_testing(&testing).unwrap(),
        build_po_search(&search).unwrap(),
        build_assign_search(&search).unwrap(),
    ];
    models.push(add_slot_costs(&models[1], &[ratio(1, 3), ratio(2, 1)]).unwrap());
    models.push(add_precedence(&models[0], &[(0, 2)]).unwrap());
    for model in &models {
        let text = emit_lp(model);
        let parsed = parse_lp(&text).unwrap();
        assert_eq!(parsed.kind, model.kind);
        assert_eq!(emit_lp(&parsed), text);
        let binaries = parsed.variables().iter().filter(|v| v.kind == VarKind::Binary).count();
        let expected = model.variables().iter().filter(|v| v.kind == VarKind::Binary).count();
        assert_eq!(binaries, expected);
    }
}

#[test]
fn scaled_rows_keep_their_meaning() {
    let inst = Instance::testing(1, 2, vec![3, 1], vec![ratio(1, 3), ratio(2, 7)]).unwrap();
    let model = build_assign_testing(&inst).unwrap();
    let parsed = parse_lp(&emit_lp(&model)).unwrap();
    let sigma = Schedule::new(vec![vec![1], vec![0]]);
    let point = schedule_to_point(&model, &inst, &sigma).unwrap();
    let check = verify_point(&parsed, &point).unwrap();
    assert!(check.feasible, "{:?}", check.violations);
    assert_eq!(check.objective, evaluate(&inst, &sigma).unwrap());
}

#[test]
fn po_testing_golden_file() {
    let text = emit_lp(&build_po_testing(&small_testing()).unwrap());
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/po_testing_n2.lp");
    if std::env::var_os("TCTP_BLESS").is_some() {
        std::fs::write(path, &text).unwrap();
    }
    assert_eq!(text, std::fs::read_to_string(path).unwrap());
}
