use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};
use thiserror::Error;

use super::{Formulation, LinearModel, Sense, VarKind};
use crate::instance::{Instance, Variant};
use crate::scalar::Rational;
use crate::schedule::{ensure_valid, InvalidSchedule, Schedule};

/// Values of model variables by name.
pub type Point = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PointError {
    #[error(transparent)]
    InvalidSchedule(#[from] InvalidSchedule),
    #[error("model has no builder metadata")]
    MissingKind,
    #[error("instance does not match the model ({0})")]
    InstanceMismatch(String),
    #[error("point has no value for variable {0}")]
    MissingVariable(String),
}

/// One failed check; `slack` is negative by the amount of violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolatedConstraint {
    pub name: String,
    pub lhs: Rational,
    pub sense: Sense,
    pub rhs: Rational,
    pub slack: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verification {
    pub feasible: bool,
    pub objective: Rational,
    pub violations: Vec<ViolatedConstraint>,
}

/// Exact check of every constraint, bound and integrality requirement.
pub fn verify_point(model: &LinearModel, point: &Point) -> Result<Verification, PointError> {
    let mut values = Vec::with_capacity(model.variables().len());
    for var in model.variables() {
        let v = point
            .get(&var.name)
            .ok_or_else(|| PointError::MissingVariable(var.name.clone()))?;
        values.push(v.clone());
    }
    let mut violations = Vec::new();
    for (var, v) in model.variables().iter().zip(&values) {
        if *v < var.lower {
            violations.push(ViolatedConstraint {
                name: format!("lower_bound_{}", var.name),
                lhs: v.clone(),
                sense: Sense::Ge,
                rhs: var.lower.clone(),
                slack: v - &var.lower,
            });
        }
        if *v > var.upper {
            violations.push(ViolatedConstraint {
                name: format!("upper_bound_{}", var.name),
                lhs: v.clone(),
                sense: Sense::Le,
                rhs: var.upper.clone(),
                slack: &var.upper - v,
            });
        }
        if var.kind == VarKind::Binary && !v.is_integer() {
            let frac = v - v.floor();
            let dist = if frac < Rational::one() - &frac { frac } else { Rational::one() - frac };
            violations.push(ViolatedConstraint {
                name: format!("integrality_{}", var.name),
                lhs: v.clone(),
                sense: Sense::Eq,
                rhs: v.round(),
                slack: -dist,
            });
        }
    }
    for c in model.constraints() {
        let lhs = c
            .terms
            .iter()
            .fold(Rational::zero(), |acc, (v, coef)| acc + coef * &values[*v]);
        let slack = match c.sense {
            Sense::Le => &c.rhs - &lhs,
            Sense::Ge => &lhs - &c.rhs,
            Sense::Eq => {
                let diff = &lhs - &c.rhs;
                if diff < Rational::zero() {
                    diff
                } else {
                    -diff
                }
            }
        };
        if slack < Rational::zero() {
            violations.push(ViolatedConstraint {
                name: c.name.clone(),
                lhs,
                sense: c.sense,
                rhs: c.rhs.clone(),
                slack,
            });
        }
    }
    let objective = model
        .objective()
        .iter()
        .fold(Rational::zero(), |acc, (v, coef)| acc + coef * &values[*v]);
    Ok(Verification {
        feasible: violations.is_empty(),
        objective,
        violations,
    })
}

fn bit(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// The point a schedule induces: binaries from the slot assignment, every
/// continuous variable at the smallest value its constraints allow.
///
/// For partial-order models the schedule is of the original instance; the
/// dummy tests are placed into spare capacity first.
pub fn schedule_to_point(model: &LinearModel, instance: &Instance<Rational>, schedule: &Schedule) -> Result<Point, PointError> {
    let kind = model.kind.ok_or(PointError::MissingKind)?;
    ensure_valid(instance, schedule)?;
    if kind.variant != instance.variant()
        || kind.original_n != instance.n()
        || kind.machines != instance.machines()
        || kind.deadline != instance.deadline()
    {
        return Err(PointError::InstanceMismatch(format!("model is {kind}")));
    }
    let padded = instance.pad_to_full();
    let (inst, sched) = if kind.n > instance.n() {
        (padded.instance.clone(), padded.lift(schedule))
    } else {
        (instance.clone(), schedule.clone())
    };
    let n = inst.n();
    let deadline = inst.deadline();
    let slot: Vec<usize> = sched.slot_of(n).into_iter().map(|s| s.expect("valid")).collect();
    let mut point = Point::new();
    let pi = |j: usize| inst.hiding_probability(j);

    match kind.formulation {
        Formulation::PartialOrder => {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        point.insert(format!("d_{}_{}", i + 1, j + 1), bit(slot[i] < slot[j]));
                    }
                    if i < j {
                        point.insert(format!("mu_{}_{}", i + 1, j + 1), bit(slot[i] == slot[j]));
                    }
                }
            }
            match kind.variant {
                Variant::Testing => {
                    for i in 0..n {
                        let mut a = Rational::one();
                        point.insert(format!("a_{}_0", i + 1), a.clone());
                        for j in 1..=n {
                            if slot[j - 1] < slot[i] {
                                a *= inst.pass_probability(j - 1);
                            }
                            point.insert(format!("a_{}_{}", i + 1, j), a.clone());
                        }
                    }
                }
                Variant::Search => {
                    for i in 0..n {
                        let a = (0..n)
                            .filter(|&j| slot[j] >= slot[i])
                            .fold(Rational::zero(), |acc, j| acc + pi(j));
                        point.insert(format!("a_{}", i + 1), a);
                    }
                }
            }
        }
        Formulation::Assignment => {
            for j in 0..n {
                for t in 0..deadline {
                    point.insert(format!("x_{}_{}", j + 1, t + 1), bit(slot[j] == t));
                }
            }
            // reach[t]: probability that slot t is reached
            let mut reach = vec![Rational::one(); deadline];
            match kind.variant {
                Variant::Testing => {
                    let mut z = vec![Rational::one(); n + 1];
                    for (j, zj) in z.iter().enumerate() {
                        point.insert(format!("z_{}_1", j), zj.clone());
                    }
                    for t in 1..deadline {
                        z[0] = z[n].clone();
                        for j in 1..=n {
                            z[j] = if slot[j - 1] == t - 1 {
                                inst.pass_probability(j - 1) * &z[j - 1]
                            } else {
                                z[j - 1].clone()
                            };
                        }
                        for (j, zj) in z.iter().enumerate() {
                            point.insert(format!("z_{}_{}", j, t + 1), zj.clone());
                        }
                        reach[t] = z[n].clone();
                    }
                }
                Variant::Search => {
                    for (t, r) in reach.iter_mut().enumerate() {
                        *r = (0..n).filter(|&j| slot[j] >= t).fold(Rational::zero(), |acc, j| acc + pi(j));
                        point.insert(format!("zt_{}", t + 1), r.clone());
                    }
                }
            }
            for j in 0..n {
                point.insert(format!("y_{}", j + 1), reach[slot[j]].clone());
            }
            if model.var_index("u_1").is_some() {
                for (t, r) in reach.iter().enumerate() {
                    let used = slot.contains(&t);
                    point.insert(format!("u_{}", t + 1), if used { r.clone() } else { Rational::zero() });
                }
            }
        }
    }
    Ok(point)
}

/// Reads the slot assignment back out of a point (binaries rounded at
/// 1/2), dropping padding tests. `None` if the point is not a schedule.
pub fn point_to_schedule(model: &LinearModel, point: &Point) -> Option<Schedule> {
    let kind = model.kind?;
    let half = Rational::new(1.into(), 2.into());
    let on = |name: String| point.get(&name).is_some_and(|v| *v >= half);
    let n = kind.n;
    let mut slots = vec![Vec::new(); kind.deadline];
    for j in 0..n {
        let t = match kind.formulation {
            Formulation::Assignment => {
                let hits: Vec<usize> = (0..kind.deadline)
                    .filter(|&t| on(format!("x_{}_{}", j + 1, t + 1)))
                    .collect();
                if hits.len() != 1 {
                    return None;
                }
                hits[0]
            }
            Formulation::PartialOrder => {
                let before = (0..n).filter(|&i| i != j && on(format!("d_{}_{}", i + 1, j + 1))).count();
                if before % kind.machines != 0 {
                    return None;
                }
                before / kind.machines
            }
        };
        if t >= kind.deadline {
            return None;
        }
        if j < kind.original_n {
            slots[t].push(j);
        }
    }
    Some(Schedule::new(slots))
}
