use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use super::{Formulation, LinearModel, MipError, ModelKind, Sense, VarKind};
use crate::instance::{Instance, Variant};
use crate::scalar::Rational;

fn one() -> Rational {
    Rational::one()
}

fn zero() -> Rational {
    Rational::zero()
}

fn neg_one() -> Rational {
    -Rational::one()
}

fn d(i: usize, j: usize) -> String {
    format!("d_{}_{}", i + 1, j + 1)
}

fn mu(i: usize, j: usize) -> String {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    format!("mu_{}_{}", a + 1, b + 1)
}

fn x(j: usize, t: usize) -> String {
    format!("x_{}_{}", j + 1, t + 1)
}

fn binary(model: &mut LinearModel, name: String) -> Result<usize, MipError> {
    model.add_variable(name, VarKind::Binary, zero(), one())
}

fn unit(model: &mut LinearModel, name: String) -> Result<usize, MipError> {
    model.add_variable(name, VarKind::Continuous, zero(), one())
}

fn require(instance: &Instance<Rational>, variant: Variant, builder: &'static str) -> Result<(), MipError> {
    if instance.variant() != variant {
        return Err(MipError::WrongVariant {
            builder,
            expected: variant.name(),
        });
    }
    Ok(())
}

/// Shared precedence/simultaneity skeleton on a full instance.
fn po_skeleton(full: &Instance<Rational>, original_n: usize) -> Result<LinearModel, MipError> {
    let n = full.n();
    let mut model = LinearModel::new();
    model.kind = Some(ModelKind {
        formulation: Formulation::PartialOrder,
        variant: full.variant(),
        n,
        original_n,
        machines: full.machines(),
        deadline: full.deadline(),
    });
    model.comments.push(String::from(
        "transitivity constraints are listed in full; solvers may treat them as lazy",
    ));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                binary(&mut model, d(i, j))?;
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            binary(&mut model, mu(i, j))?;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            model.add_constraint(
                format!("order_{}_{}", i + 1, j + 1),
                [(d(i, j), one()), (d(j, i), one()), (mu(i, j), one())],
                Sense::Eq,
                one(),
            )?;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                model.add_constraint(
                    format!("trans_{}_{}_{}", i + 1, j + 1, k + 1),
                    [(mu(i, j), one()), (d(i, j), one()), (d(j, k), one()), (d(i, k), neg_one())],
                    Sense::Le,
                    one(),
                )?;
            }
        }
    }
    let m_minus_one = Rational::from_integer((full.machines() as i64 - 1).into());
    for i in 0..n {
        model.add_constraint(
            format!("cap_{}", i + 1),
            (0..n).filter(|&j| j != i).map(|j| (mu(i, j), one())),
            Sense::Eq,
            m_minus_one.clone(),
        )?;
    }
    Ok(model)
}

/// Partial-order model of the testing variant on the padded instance.
///
/// `a_i_j` is the probability that test i is performed given that tests
/// `j+1..n` pass; `a_i_n` enters the objective with weight `c_i`. For
/// `j = i` the term `d_i_i` is absent.
pub fn build_po_testing(instance: &Instance<Rational>) -> Result<LinearModel, MipError> {
    require(instance, Variant::Testing, "partial-order testing model")?;
    let padded = instance.pad_to_full();
    let full = &padded.instance;
    let n = full.n();
    let mut model = po_skeleton(full, padded.original_n)?;
    let a = |i: usize, j: usize| format!("a_{}_{}", i + 1, j);
    for i in 0..n {
        for j in 0..=n {
            unit(&mut model, a(i, j))?;
        }
    }
    let probs = full.success_probs().expect("testing");
    for i in 0..n {
        model.add_constraint(format!("a0_{}", i + 1), [(a(i, 0), one())], Sense::Eq, one())?;
        for j in 1..=n {
            let test = j - 1;
            let mut terms = vec![(a(i, j), one()), (a(i, j - 1), neg_one())];
            if test != i {
                terms.push((d(test, i), one()));
            }
            model.add_constraint(format!("aprec_{}_{}", i + 1, j), terms, Sense::Ge, zero())?;
            model.add_constraint(
                format!("aprob_{}_{}", i + 1, j),
                [(a(i, j), one()), (a(i, j - 1), -probs[test].clone())],
                Sense::Ge,
                zero(),
            )?;
        }
    }
    let costs = full.costs();
    model.add_objective_terms((0..n).map(|i| (a(i, n), Rational::from_integer(costs[i].into()))))?;
    Ok(model)
}

/// Partial-order model of the search variant on the padded instance:
/// `a_i = pi_i + sum_j pi_j (mu_i_j + d_i_j)`.
pub fn build_po_search(instance: &Instance<Rational>) -> Result<LinearModel, MipError> {
    require(instance, Variant::Search, "partial-order search model")?;
    let padded = instance.pad_to_full();
    let full = &padded.instance;
    let n = full.n();
    let mut model = po_skeleton(full, padded.original_n)?;
    let a = |i: usize| format!("a_{}", i + 1);
    for i in 0..n {
        unit(&mut model, a(i))?;
    }
    let pi: Vec<Rational> = (0..n).map(|j| full.hiding_probability(j)).collect();
    for i in 0..n {
        let mut terms = vec![(a(i), one())];
        for j in (0..n).filter(|&j| j != i) {
            terms.push((mu(i, j), -pi[j].clone()));
            terms.push((d(i, j), -pi[j].clone()));
        }
        model.add_constraint(format!("alpha_{}", i + 1), terms, Sense::Eq, pi[i].clone())?;
    }
    let costs = full.costs();
    model.add_objective_terms((0..n).map(|i| (a(i), Rational::from_integer(costs[i].into()))))?;
    Ok(model)
}

fn assign_skeleton(instance: &Instance<Rational>) -> Result<LinearModel, MipError> {
    let n = instance.n();
    let deadline = instance.deadline();
    let mut model = LinearModel::new();
    model.kind = Some(ModelKind {
        formulation: Formulation::Assignment,
        variant: instance.variant(),
        n,
        original_n: n,
        machines: instance.machines(),
        deadline,
    });
    for j in 0..n {
        for t in 0..deadline {
            binary(&mut model, x(j, t))?;
        }
    }
    for j in 0..n {
        unit(&mut model, format!("y_{}", j + 1))?;
    }
    for j in 0..n {
        model.add_constraint(
            format!("assign_{}", j + 1),
            (0..deadline).map(|t| (x(j, t), one())),
            Sense::Eq,
            one(),
        )?;
    }
    let m = Rational::from_integer((instance.machines() as i64).into());
    for t in 0..deadline {
        model.add_constraint(
            format!("machines_{}", t + 1),
            (0..n).map(|j| (x(j, t), one())),
            Sense::Le,
            m.clone(),
        )?;
    }
    Ok(model)
}

/// `y_j >= s_t - 1 + sum_{s <= t} x_j_s` where `s_t` names the probability
/// that slot t is reached.
fn performed(model: &mut LinearModel, n: usize, deadline: usize, reach: impl Fn(usize) -> String) -> Result<(), MipError> {
    for j in 0..n {
        for t in 0..deadline {
            let mut terms = vec![(format!("y_{}", j + 1), one()), (reach(t), neg_one())];
            terms.extend((0..=t).map(|s| (x(j, s), neg_one())));
            model.add_constraint(format!("perf_{}_{}", j + 1, t + 1), terms, Sense::Ge, neg_one())?;
        }
    }
    Ok(())
}

fn y_objective(model: &mut LinearModel, instance: &Instance<Rational>) -> Result<(), MipError> {
    let costs = instance.costs();
    model.add_objective_terms((0..instance.n()).map(|j| (format!("y_{}", j + 1), Rational::from_integer(costs[j].into()))))
}

/// Assignment model of the testing variant. `z_j_t` is the probability
/// that slot t is reached given that the tests after j in slot t-1 pass.
pub fn build_assign_testing(instance: &Instance<Rational>) -> Result<LinearModel, MipError> {
    require(instance, Variant::Testing, "assignment testing model")?;
    let n = instance.n();
    let deadline = instance.deadline();
    let mut model = assign_skeleton(instance)?;
    let z = |j: usize, t: usize| format!("z_{}_{}", j, t + 1);
    for j in 0..=n {
        for t in 0..deadline {
            unit(&mut model, z(j, t))?;
        }
    }
    performed(&mut model, n, deadline, |t| z(n, t))?;
    for j in 0..=n {
        model.add_constraint(format!("z1_{}", j), [(z(j, 0), one())], Sense::Eq, one())?;
    }
    let probs = instance.success_probs().expect("testing");
    for t in 1..deadline {
        model.add_constraint(
            format!("zlink_{}", t + 1),
            [(z(0, t), one()), (z(n, t - 1), neg_one())],
            Sense::Eq,
            zero(),
        )?;
        for j in 1..=n {
            model.add_constraint(
                format!("zskip_{}_{}", j, t + 1),
                [(z(j, t), one()), (z(j - 1, t), neg_one()), (x(j - 1, t - 1), one())],
                Sense::Ge,
                zero(),
            )?;
            model.add_constraint(
                format!("zprob_{}_{}", j, t + 1),
                [(z(j, t), one()), (z(j - 1, t), -probs[j - 1].clone())],
                Sense::Ge,
                zero(),
            )?;
        }
    }
    y_objective(&mut model, instance)?;
    Ok(model)
}

/// Assignment model of the search variant: `zt_t` is the probability that
/// the target sits in a location searched at slot t or later.
pub fn build_assign_search(instance: &Instance<Rational>) -> Result<LinearModel, MipError> {
    require(instance, Variant::Search, "assignment search model")?;
    let n = instance.n();
    let deadline = instance.deadline();
    let mut model = assign_skeleton(instance)?;
    let zt = |t: usize| format!("zt_{}", t + 1);
    for t in 0..deadline {
        unit(&mut model, zt(t))?;
    }
    performed(&mut model, n, deadline, zt)?;
    let pi: Vec<Rational> = (0..n).map(|j| instance.hiding_probability(j)).collect();
    for t in 0..deadline {
        let mut terms = vec![(zt(t), one())];
        for k in t..deadline {
            terms.extend((0..n).map(|j| (x(j, k), -pi[j].clone())));
        }
        model.add_constraint(format!("zsum_{}", t + 1), terms, Sense::Eq, zero())?;
    }
    y_objective(&mut model, instance)?;
    Ok(model)
}

/// Builds the requested formulation for the instance's variant.
pub fn build(formulation: Formulation, instance: &Instance<Rational>) -> Result<LinearModel, MipError> {
    match (formulation, instance.variant()) {
        (Formulation::PartialOrder, Variant::Testing) => build_po_testing(instance),
        (Formulation::PartialOrder, Variant::Search) => build_po_search(instance),
        (Formulation::Assignment, Variant::Testing) => build_assign_testing(instance),
        (Formulation::Assignment, Variant::Search) => build_assign_search(instance),
    }
}

/// Fixes `d_i_j = 1` for every arc `(i, j)` (0-based) of a strict partial
/// order. Partial-order models only.
pub fn add_precedence(model: &LinearModel, arcs: &[(usize, usize)]) -> Result<LinearModel, MipError> {
    let kind = model.kind.ok_or(MipError::MissingKind)?;
    if kind.formulation != Formulation::PartialOrder {
        return Err(MipError::WrongFormulation("precedence", "partial-order"));
    }
    for &(i, j) in arcs {
        if i >= kind.original_n || j >= kind.original_n {
            return Err(MipError::ArcOutOfRange(i + 1, j + 1));
        }
    }
    if let Some(test) = find_cycle(kind.original_n, arcs) {
        return Err(MipError::CyclicPrecedence(test + 1));
    }
    let mut out = model.clone();
    for &(i, j) in arcs {
        let name = format!("prec_{}_{}", i + 1, j + 1);
        if out.constraint(&name).is_none() {
            out.add_constraint(name, [(d(i, j), one())], Sense::Eq, one())?;
        }
    }
    Ok(out)
}

/// A test on a directed cycle, if any (self-loops included).
fn find_cycle(n: usize, arcs: &[(usize, usize)]) -> Option<usize> {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in arcs {
        adj[i].push(j);
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state = vec![0u8; n];
    for root in 0..n {
        if state[root] != 0 {
            continue;
        }
        let mut stack = vec![(root, 0usize)];
        state[root] = 1;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < adj[v].len() {
                let w = adj[v][*next];
                *next += 1;
                match state[w] {
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    1 => return Some(w),
                    _ => {}
                }
            } else {
                state[v] = 2;
                stack.pop();
            }
        }
    }
    None
}

/// Adds a fixed cost `beta_t` paid with the probability that slot t is
/// reached and holds at least one test: `u_t >= s_t - 1 + x_j_t` for every
/// test j, objective `+= sum beta_t u_t`. Assignment models only.
pub fn add_slot_costs(model: &LinearModel, beta: &[Rational]) -> Result<LinearModel, MipError> {
    let kind = model.kind.ok_or(MipError::MissingKind)?;
    if kind.formulation != Formulation::Assignment {
        return Err(MipError::WrongFormulation("slot costs", "assignment"));
    }
    if beta.len() != kind.deadline {
        return Err(MipError::SlotCostLength {
            expected: kind.deadline,
            found: beta.len(),
        });
    }
    if beta.iter().any(|b| *b < zero()) {
        return Err(MipError::NegativeSlotCost);
    }
    let mut out = model.clone();
    let reach = |t: usize| match kind.variant {
        Variant::Testing => format!("z_{}_{}", kind.n, t + 1),
        Variant::Search => format!("zt_{}", t + 1),
    };
    for t in 0..kind.deadline {
        unit(&mut out, format!("u_{}", t + 1))?;
    }
    for t in 0..kind.deadline {
        for j in 0..kind.n {
            out.add_constraint(
                format!("ucost_{}_{}", t + 1, j + 1),
                [(format!("u_{}", t + 1), one()), (reach(t), neg_one()), (x(j, t), neg_one())],
                Sense::Ge,
                neg_one(),
            )?;
        }
    }
    out.add_objective_terms((0..kind.deadline).map(|t| (format!("u_{}", t + 1), beta[t].clone())))?;
    Ok(out)
}
