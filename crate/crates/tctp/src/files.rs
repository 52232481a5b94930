//! JSON instance, report and manifest files, plus the small text formats
//! (precedence arcs, slot costs, solver solutions).

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use tctp_core::instgen::GenConfig;
use tctp_core::mip::{LinearModel, Point};
use tctp_core::scalar::{decimal_string, exact_f64, parse_rational};
use tctp_core::{Instance, Likelihoods, Rational, Schedule, SolveReport, Status, Variant};

use crate::error::CliError;

/// Significant digits for non-terminating decimals in human-facing output.
pub const DISPLAY_DIGITS: usize = 12;

/// An integer that is written as a JSON number when it fits in 64 bits and
/// as a string otherwise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BigNum {
    Small(i64),
    Large(String),
}

impl BigNum {
    pub fn from_bigint(value: &BigInt) -> Self {
        match i64::try_from(value) {
            Ok(v) => BigNum::Small(v),
            Err(_) => BigNum::Large(value.to_string()),
        }
    }

    pub fn to_bigint(&self) -> Result<BigInt, CliError> {
        match self {
            BigNum::Small(v) => Ok(BigInt::from(*v)),
            BigNum::Large(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("`{s}` is not an integer"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: BigNum,
    pub den: BigNum,
}

impl Fraction {
    pub fn from_rational(value: &Rational) -> Self {
        Fraction {
            num: BigNum::from_bigint(value.numer()),
            den: BigNum::from_bigint(value.denom()),
        }
    }

    pub fn to_rational(&self) -> Result<Rational, CliError> {
        let den = self.den.to_bigint()?;
        if den == BigInt::from(0) {
            return Err(CliError::Parse("zero denominator".into()));
        }
        Ok(Rational::new(self.num.to_bigint()?, den))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProbsFile {
    Weights(Vec<u64>),
    Success(Vec<Fraction>),
}

/// On-disk instance: `{variant, m, T, costs, probs}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub variant: String,
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub costs: Vec<u64>,
    pub probs: ProbsFile,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance) -> Self {
        let probs = match instance.likelihoods() {
            Likelihoods::Success(p) => ProbsFile::Success(p.iter().map(Fraction::from_rational).collect()),
            Likelihoods::Weights(w) => ProbsFile::Weights(w.clone()),
        };
        InstanceFile {
            variant: instance.variant().name().into(),
            m: instance.machines(),
            t: instance.deadline(),
            costs: instance.costs().to_vec(),
            probs,
        }
    }

    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let likelihoods = match (self.variant.as_str(), &self.probs) {
            ("testing", ProbsFile::Success(p)) => {
                Likelihoods::Success(p.iter().map(Fraction::to_rational).collect::<Result<_, _>>()?)
            }
            // An empty list parses as weights; accept it for either variant.
            ("testing", ProbsFile::Weights(w)) if w.is_empty() => Likelihoods::Success(Vec::new()),
            ("search", ProbsFile::Weights(w)) => Likelihoods::Weights(w.clone()),
            ("testing", _) => return Err(CliError::Parse("testing probs must be {num, den} objects".into())),
            ("search", _) => return Err(CliError::Parse("search probs must be integer weights".into())),
            (other, _) => return Err(CliError::Parse(format!("unknown variant `{other}`"))),
        };
        Instance::new(self.m, self.t, self.costs.clone(), likelihoods)
            .map_err(|e| CliError::Infeasible(e.to_string()))
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text
}

pub fn instance_to_json(instance: &Instance) -> String {
    to_pretty_json(&InstanceFile::from_instance(instance))
}

pub fn instance_from_json(text: &str) -> Result<Instance, CliError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("instance: {e}")))?;
    file.to_instance()
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_instance(path: &Path) -> Result<Instance, CliError> {
    instance_from_json(&read_text(path)?).map_err(|e| match e {
        CliError::Parse(msg) => CliError::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn write_instance(path: &Path, instance: &Instance) -> Result<(), CliError> {
    write_text(path, &instance_to_json(instance))
}

/// Schedules are written as `T` arrays of 1-based test indices.
pub fn schedule_to_file(schedule: &Schedule) -> Vec<Vec<usize>> {
    schedule
        .slots()
        .iter()
        .map(|slot| slot.iter().map(|j| j + 1).collect())
        .collect()
}

pub fn schedule_from_file(slots: &[Vec<usize>]) -> Result<Schedule, CliError> {
    slots
        .iter()
        .map(|slot| {
            slot.iter()
                .map(|&j| j.checked_sub(1).ok_or_else(|| CliError::Parse("test indices are 1-based".into())))
                .collect()
        })
        .collect::<Result<Vec<Vec<usize>>, _>>()
        .map(Schedule::new)
}

/// Exact decimal when terminating, otherwise rounded for display.
pub fn decimal(value: &Rational) -> String {
    decimal_string(value, DISPLAY_DIGITS)
}

/// `num/den`, or just the integer.
pub fn fraction(value: &Rational) -> String {
    value.to_string()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub method: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<String>,
    pub objective: String,
    pub objective_exact: String,
    pub schedule: Vec<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_seconds: Option<f64>,
}

impl ReportFile {
    pub fn from_report(report: &SolveReport) -> Self {
        let epsilon = match &report.status {
            Status::ApproxWithFactor(eps) => Some(fraction(eps)),
            _ => None,
        };
        let status = match report.status {
            Status::Optimal => "optimal",
            Status::Heuristic => "heuristic",
            Status::ApproxWithFactor(_) => "approximate",
        };
        ReportFile {
            method: report.method.name().into(),
            status: status.into(),
            epsilon,
            objective: decimal(&report.objective),
            objective_exact: fraction(&report.objective),
            schedule: schedule_to_file(&report.schedule),
            elapsed_seconds: report.elapsed,
        }
    }

    pub fn to_json(&self) -> String {
        to_pretty_json(self)
    }
}

/// One generated instance and everything needed to regenerate it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub file: String,
    pub variant: String,
    pub seed: u64,
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub cost_range: [u64; 2],
    pub weight_range: [u64; 2],
    pub q_range: [String; 2],
}

impl ManifestEntry {
    pub fn new(file: String, variant: Variant, config: &GenConfig) -> Self {
        ManifestEntry {
            file,
            variant: variant.name().into(),
            seed: config.seed,
            m: config.machines,
            t: config.deadline,
            cost_range: [config.cost_range.0, config.cost_range.1],
            weight_range: [config.weight_range.0, config.weight_range.1],
            q_range: [fraction(&config.q_range.0), fraction(&config.q_range.1)],
        }
    }

    pub fn config(&self) -> Result<GenConfig, CliError> {
        let q = |s: &str| parse_rational(s).ok_or_else(|| CliError::Parse(format!("bad q bound `{s}`")));
        Ok(GenConfig {
            machines: self.m,
            deadline: self.t,
            cost_range: (self.cost_range[0], self.cost_range[1]),
            weight_range: (self.weight_range[0], self.weight_range[1]),
            q_range: (q(&self.q_range[0])?, q(&self.q_range[1])?),
            seed: self.seed,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub instances: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn to_json(&self) -> String {
        to_pretty_json(self)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("manifest: {e}")))
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Arc list, one `i j` pair of 1-based tests per line; returns 0-based arcs.
pub fn parse_precedence(text: &str) -> Result<Vec<(usize, usize)>, CliError> {
    content_lines(text)
        .map(|(line, l)| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            let index = |s: &str| {
                s.parse::<usize>()
                    .ok()
                    .and_then(|v| v.checked_sub(1))
                    .ok_or_else(|| CliError::Parse(format!("precedence line {line}: `{s}` is not a 1-based index")))
            };
            match parts.as_slice() {
                [i, j] => Ok((index(i)?, index(j)?)),
                _ => Err(CliError::Parse(format!("precedence line {line}: expected `i j`"))),
            }
        })
        .collect()
}

/// Whitespace-separated rationals (`3`, `0.5`, `2/3`).
pub fn parse_beta(text: &str) -> Result<Vec<Rational>, CliError> {
    content_lines(text)
        .flat_map(|(line, l)| l.split_whitespace().map(move |tok| (line, tok)))
        .map(|(line, tok)| {
            parse_rational(tok).ok_or_else(|| CliError::Parse(format!("slot cost line {line}: `{tok}` is not a rational")))
        })
        .collect()
}

/// A solver value: exact decimal or fraction, else any float (taken exactly).
pub fn parse_value(text: &str) -> Option<Rational> {
    parse_rational(text).or_else(|| {
        let x: f64 = text.parse().ok()?;
        x.is_finite().then(|| exact_f64(x))
    })
}

/// Solver solution files: `name value` lines (Gurobi style) or
/// `index name value [reduced cost]` lines (CBC style). `#` starts a
/// comment; lines whose value does not parse are treated as headers.
pub fn parse_solution(text: &str) -> Result<Point, CliError> {
    let mut point = Point::new();
    for (line, l) in content_lines(text) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let (name, value) = match parts.as_slice() {
            [name, value] => (*name, *value),
            [index, name, value, ..] if index.parse::<usize>().is_ok() => (*name, *value),
            _ => continue,
        };
        let Some(value) = parse_value(value) else {
            continue;
        };
        if point.insert(name.to_string(), value).is_some() {
            return Err(CliError::Parse(format!("solution line {line}: `{name}` given twice")));
        }
    }
    Ok(point)
}

/// Completes a solver point: model variables the file omits are 0.
/// Returns the names in the file that the model does not know.
pub fn complete_point(model: &LinearModel, point: &mut Point) -> Vec<String> {
    let unknown = point
        .keys()
        .filter(|name| model.var_index(name).is_none())
        .cloned()
        .collect();
    for var in model.variables() {
        point.entry(var.name.clone()).or_insert_with(|| Rational::from_integer(0.into()));
    }
    unknown
}
