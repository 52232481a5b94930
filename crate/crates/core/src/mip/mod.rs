//! Solver-agnostic linear models for both formulations of both variants,
//! LP-format text, and exact checking of candidate points.
//!
//! Variable names (1-based): `d_i_j` (i before j), `mu_i_j` (i < j, same
//! slot), `a_i_j` / `a_i` (probability that test i is performed), `x_j_t`
//! (j in slot t), `y_j`, `z_j_t`, `zt_t`, `u_t`.

mod build;
mod lp;
mod point;

pub use build::{
    add_precedence, add_slot_costs, build, build_assign_search, build_assign_testing, build_po_search,
    build_po_testing,
};
pub use lp::{emit_lp, parse_lp, LpParseError};
pub use point::{point_to_schedule, schedule_to_point, verify_point, Point, PointError, Verification, ViolatedConstraint};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::instance::Variant;
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// Precedence (`d`) and simultaneity (`mu`) variables.
    PartialOrder,
    /// Slot assignment (`x`) variables.
    Assignment,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Formulation::PartialOrder => "po",
            Formulation::Assignment => "assign",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "po" => Some(Formulation::PartialOrder),
            "assign" => Some(Formulation::Assignment),
            _ => None,
        }
    }
}

/// Which builder produced a model, plus the instance dimensions it was
/// built for. Partial-order models are always built on the padded
/// instance, so `n` may exceed `original_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModelKind {
    pub formulation: Formulation,
    pub variant: Variant,
    pub n: usize,
    pub original_n: usize,
    pub machines: usize,
    pub deadline: usize,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-{} n={} original_n={} m={} T={}",
            self.formulation.name(),
            self.variant.name(),
            self.n,
            self.original_n,
            self.machines,
            self.deadline
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Binary,
    Continuous,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: Rational,
    pub upper: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl Sense {
    pub fn symbol(self) -> &'static str {
        match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        }
    }
}

/// `sum coef * var  sense  rhs`, with variables referenced by index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MipError {
    #[error("{builder} needs a {expected} instance")]
    WrongVariant { builder: &'static str, expected: &'static str },
    #[error("variable {0} declared twice")]
    DuplicateVariable(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("constraint {0} declared twice")]
    DuplicateConstraint(String),
    #[error("precedence arcs contain a cycle through test {0}")]
    CyclicPrecedence(usize),
    #[error("precedence arc ({0}, {1}) references a test outside the instance")]
    ArcOutOfRange(usize, usize),
    #[error("{0} applies only to {1} models")]
    WrongFormulation(&'static str, &'static str),
    #[error("expected {expected} slot costs, got {found}")]
    SlotCostLength { expected: usize, found: usize },
    #[error("slot costs must be non-negative")]
    NegativeSlotCost,
    #[error("model has no builder metadata")]
    MissingKind,
}

/// Minimisation model with exact rational data.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearModel {
    pub kind: Option<ModelKind>,
    pub comments: Vec<String>,
    variables: Vec<Variable>,
    index: BTreeMap<String, usize>,
    constraints: Vec<Constraint>,
    constraint_names: BTreeMap<String, usize>,
    objective: Vec<(usize, Rational)>,
}

impl LinearModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective(&self) -> &[(usize, Rational)] {
        &self.objective
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraint_names.get(name).map(|&i| &self.constraints[i])
    }

    pub fn add_variable(&mut self, name: String, kind: VarKind, lower: Rational, upper: Rational) -> Result<usize, MipError> {
        if self.index.contains_key(&name) {
            return Err(MipError::DuplicateVariable(name));
        }
        let id = self.variables.len();
        self.index.insert(name.clone(), id);
        self.variables.push(Variable {
            name,
            kind,
            lower,
            upper,
        });
        Ok(id)
    }

    /// Adds a constraint over named variables; zero coefficients are
    /// dropped and repeated variables merged.
    pub fn add_constraint(
        &mut self,
        name: String,
        terms: impl IntoIterator<Item = (String, Rational)>,
        sense: Sense,
        rhs: Rational,
    ) -> Result<(), MipError> {
        if self.constraint_names.contains_key(&name) {
            return Err(MipError::DuplicateConstraint(name));
        }
        let terms = self.resolve(terms)?;
        self.constraint_names.insert(name.clone(), self.constraints.len());
        self.constraints.push(Constraint {
            name,
            terms,
            sense,
            rhs,
        });
        Ok(())
    }

    pub fn add_objective_terms(&mut self, terms: impl IntoIterator<Item = (String, Rational)>) -> Result<(), MipError> {
        let mut all: Vec<(String, Rational)> = self
            .objective
            .iter()
            .map(|(v, c)| (self.variables[*v].name.clone(), c.clone()))
            .collect();
        all.extend(terms);
        self.objective = self.resolve(all)?;
        Ok(())
    }

    fn resolve(&self, terms: impl IntoIterator<Item = (String, Rational)>) -> Result<Vec<(usize, Rational)>, MipError> {
        let mut out: Vec<(usize, Rational)> = Vec::new();
        for (name, coef) in terms {
            let id = self.var_index(&name).ok_or(MipError::UnknownVariable(name))?;
            match out.iter_mut().find(|(v, _)| *v == id) {
                Some((_, c)) => *c += coef,
                None => out.push((id, coef)),
            }
        }
        out.retain(|(_, c)| *c != Rational::from_integer(0.into()));
        Ok(out)
    }
}
