//! Solver results.

use core::fmt;

use crate::scalar::Rational;
use crate::schedule::Schedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Dp2,
    Fptas,
    Greedy,
    LocalSearch,
    MultiStart,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Oracle,
        Method::Dp2,
        Method::Fptas,
        Method::Greedy,
        Method::LocalSearch,
        Method::MultiStart,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Dp2 => "dp2",
            Method::Fptas => "fptas",
            Method::Greedy => "greedy",
            Method::LocalSearch => "localsearch",
            Method::MultiStart => "multistart",
        }
    }

    pub fn from_name(name: &str) -> Option<Method> {
        Method::ALL.into_iter().find(|m| m.name() == name)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Heuristic,
    /// Within a factor `1 + eps` of the optimum.
    ApproxWithFactor(Rational),
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Optimal => f.write_str("optimal"),
            Status::Heuristic => f.write_str("heuristic"),
            Status::ApproxWithFactor(eps) => write!(f, "approx(1+{eps})"),
        }
    }
}

/// A schedule together with its exact objective.
///
/// `elapsed` is left `None` here; the std front end fills it in.
#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport<P = Rational> {
    pub schedule: Schedule,
    pub objective: P,
    pub method: Method,
    pub status: Status,
    pub elapsed: Option<f64>,
}

impl<P> SolveReport<P> {
    pub fn new(schedule: Schedule, objective: P, method: Method, status: Status) -> Self {
        SolveReport {
            schedule,
            objective,
            method,
            status,
            elapsed: None,
        }
    }
}
