use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Formulation, LinearModel, MipError, ModelKind, Sense, VarKind};
use crate::instance::Variant;
use crate::scalar::{decimal_string, exact_decimal, is_terminating, parse_decimal, Rational};

const KIND_PREFIX: &str = "tctp model: ";
const ROUNDING_NOTE: &str = "objective coefficients without a finite decimal expansion are rounded to 20 significant digits";
const TERMS_PER_LINE: usize = 8;
const OBJECTIVE_DIGITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Model(#[from] MipError),
}

fn syntax(line: usize, message: impl Into<String>) -> LpParseError {
    LpParseError::Syntax {
        line,
        message: message.into(),
    }
}

fn write_terms(out: &mut String, prefix: &str, terms: &[(String, &str)]) {
    out.push_str(prefix);
    for (k, (coef, name)) in terms.iter().enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n  ");
        }
        let (negative, magnitude) = match coef.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, coef.as_str()),
        };
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        let _ = write!(out, "{magnitude} {name}");
    }
}

fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Renders the model in LP format. Identical models give identical text.
///
/// Constraint data with a finite decimal expansion is written exactly;
/// any other constraint is multiplied through by the lcm of its
/// denominators. Objective coefficients without a finite expansion are
/// rounded and flagged in a comment.
pub fn emit_lp(model: &LinearModel) -> String {
    let mut out = String::new();
    if let Some(kind) = &model.kind {
        let _ = writeln!(out, "\\ {KIND_PREFIX}{kind}");
    }
    for c in &model.comments {
        let _ = writeln!(out, "\\ {c}");
    }
    let needs_rounding = model.objective().iter().any(|(_, c)| !is_terminating(c));
    if needs_rounding && !model.comments.iter().any(|c| c == ROUNDING_NOTE) {
        let _ = writeln!(out, "\\ {ROUNDING_NOTE}");
    }
    let vars = model.variables();

    out.push_str("Minimize\n");
    if model.objective().is_empty() {
        out.push_str(" obj: 0\n");
    } else {
        let terms: Vec<(String, &str)> = model
            .objective()
            .iter()
            .map(|(v, c)| (decimal_string(c, OBJECTIVE_DIGITS), vars[*v].name.as_str()))
            .collect();
        write_terms(&mut out, " obj: ", &terms);
        out.push('\n');
    }

    out.push_str("Subject To\n");
    for c in model.constraints() {
        let exact = c.terms.iter().all(|(_, k)| is_terminating(k)) && is_terminating(&c.rhs);
        let scale = if exact {
            Rational::one()
        } else {
            Rational::from_integer(lcm_of_denominators(c.terms.iter().map(|(_, k)| k).chain([&c.rhs])))
        };
        let render = |v: &Rational| exact_decimal(&(v * &scale)).expect("scaled value is terminating");
        let mut terms: Vec<(String, &str)> = c.terms.iter().map(|(v, k)| (render(k), vars[*v].name.as_str())).collect();
        if terms.is_empty() {
            terms.push((String::from("0"), vars.first().map_or("_", |v| v.name.as_str())));
        }
        write_terms(&mut out, &alloc::format!(" {}: ", c.name), &terms);
        let _ = writeln!(out, " {} {}", c.sense.symbol(), render(&c.rhs));
    }

    out.push_str("Bounds\n");
    for v in vars.iter().filter(|v| v.kind == VarKind::Continuous) {
        let _ = writeln!(
            out,
            " {} <= {} <= {}",
            decimal_string(&v.lower, OBJECTIVE_DIGITS),
            v.name,
            decimal_string(&v.upper, OBJECTIVE_DIGITS)
        );
    }

    let binaries: Vec<&str> = vars
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(TERMS_PER_LINE) {
            let _ = writeln!(out, " {}", chunk.join(" "));
        }
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Preamble,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    End,
}

fn parse_kind(text: &str) -> Option<ModelKind> {
    let mut parts = text.split_whitespace();
    let (form, variant) = parts.next()?.split_once('-')?;
    let formulation = Formulation::from_name(form)?;
    let variant = match variant {
        "testing" => Variant::Testing,
        "search" => Variant::Search,
        _ => return None,
    };
    let mut get = |key: &str| -> Option<usize> {
        let (k, v) = parts.next()?.split_once('=')?;
        (k == key).then_some(())?;
        v.parse().ok()
    };
    Some(ModelKind {
        formulation,
        variant,
        n: get("n")?,
        original_n: get("original_n")?,
        machines: get("m")?,
        deadline: get("T")?,
    })
}

fn parse_terms(tokens: &[&str], line: usize) -> Result<Vec<(String, Rational)>, LpParseError> {
    let mut terms = Vec::new();
    let mut sign = Rational::one();
    let mut coef: Option<Rational> = None;
    for &tok in tokens {
        match tok {
            "+" => sign = Rational::one(),
            "-" => sign = -Rational::one(),
            _ => {
                if let Some(value) = parse_decimal(tok) {
                    coef = Some(value);
                } else {
                    let c = coef.take().unwrap_or_else(Rational::one);
                    terms.push((tok.to_string(), &sign * c));
                    sign = Rational::one();
                }
            }
        }
    }
    if coef.is_some_and(|c| !c.is_zero()) {
        return Err(syntax(line, "constant terms are not supported"));
    }
    Ok(terms)
}

/// Parses the LP subset written by [`emit_lp`].
pub fn parse_lp(text: &str) -> Result<LinearModel, LpParseError> {
    let mut model = LinearModel::new();
    let mut section = Section::Preamble;
    let mut objective: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut constraints: Vec<(usize, Vec<&str>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('\\') {
            let comment = comment.trim();
            match comment.strip_prefix(KIND_PREFIX) {
                Some(kind) => {
                    model.kind = Some(parse_kind(kind).ok_or_else(|| syntax(line, "bad model header"))?);
                }
                None => model.comments.push(comment.to_string()),
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let keyword = trimmed.to_ascii_lowercase();
        let next = match keyword.as_str() {
            "minimize" | "minimise" | "min" => Some(Section::Objective),
            "subject to" | "st" | "s.t." => Some(Section::Constraints),
            "bounds" => Some(Section::Bounds),
            "binaries" | "binary" => Some(Section::Binaries),
            "end" => Some(Section::End),
            _ => None,
        };
        if let Some(s) = next {
            section = s;
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match section {
            Section::Preamble | Section::End => return Err(syntax(line, "text outside a section")),
            Section::Objective => objective.push((line, tokens)),
            Section::Constraints => {
                if tokens[0].ends_with(':') || constraints.is_empty() {
                    constraints.push((line, tokens));
                } else {
                    constraints.last_mut().expect("non-empty").1.extend(tokens);
                }
            }
            Section::Bounds => {
                let [lo, "<=", name, "<=", hi] = tokens.as_slice() else {
                    return Err(syntax(line, "expected `lo <= name <= hi`"));
                };
                let lo = parse_decimal(lo).ok_or_else(|| syntax(line, "bad lower bound"))?;
                let hi = parse_decimal(hi).ok_or_else(|| syntax(line, "bad upper bound"))?;
                model.add_variable(name.to_string(), VarKind::Continuous, lo, hi)?;
            }
            Section::Binaries => {
                for name in tokens {
                    model.add_variable(name.to_string(), VarKind::Binary, Rational::zero(), Rational::one())?;
                }
            }
        }
    }
    if section != Section::End {
        return Err(syntax(text.lines().count(), "missing End"));
    }

    let mut tokens: Vec<&str> = objective.iter().flat_map(|(_, t)| t.iter().copied()).collect();
    if tokens.first().is_some_and(|t| t.ends_with(':')) {
        tokens.remove(0);
    }
    let line = objective.first().map_or(0, |(l, _)| *l);
    let terms = parse_terms(&tokens, line)?;
    model.add_objective_terms(terms)?;

    for (line, tokens) in constraints {
        let Some(name) = tokens[0].strip_suffix(':') else {
            return Err(syntax(line, "constraint without a name"));
        };
        let sense_at = tokens
            .iter()
            .position(|t| matches!(*t, "<=" | ">=" | "=" | "=<" | "=>"))
            .ok_or_else(|| syntax(line, "constraint without a sense"))?;
        let sense = match tokens[sense_at] {
            "<=" | "=<" => Sense::Le,
            ">=" | "=>" => Sense::Ge,
            _ => Sense::Eq,
        };
        let rhs = match &tokens[sense_at + 1..] {
            [value] => parse_decimal(value).ok_or_else(|| syntax(line, "bad right-hand side"))?,
            ["-", value] => -parse_decimal(value).ok_or_else(|| syntax(line, "bad right-hand side"))?,
            _ => return Err(syntax(line, "expected a single right-hand side")),
        };
        let terms = parse_terms(&tokens[1..sense_at], line)?;
        model.add_constraint(name.to_string(), terms, sense, rhs)?;
    }
    Ok(model)
}
