//! Benchmark suites. Rows come back in instance order whatever the number
//! of worker threads; only the timing columns vary between runs.

use std::fmt::Display;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use tctp_core::enumerate::for_each_partition;
use tctp_core::exact::{brute_force_optimum, dp_two_slots, DEFAULT_NODE_LIMIT};
use tctp_core::heuristics::{greedy_min_ratio, local_search, multi_start, Partition, DEFAULT_SUBSET_CAP};
use tctp_core::instgen::{gen_greedy_gap, gen_locality_gap, gen_random, GenConfig, Q_RANGES};
use tctp_core::{evaluate, ratio, sort_by_ratio, Instance, Rational, Scalar, Schedule, SolveReport, Variant};

use crate::error::CliError;
use crate::files::{decimal, fraction, DISPLAY_DIGITS};

/// One solver run on one instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub instance: String,
    pub variant: String,
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    pub n: usize,
    pub method: String,
    pub objective: String,
    pub objective_exact: String,
    /// Relative gap to the oracle optimum, when the oracle ran.
    pub gap: Option<String>,
    pub gap_exact: Option<String>,
    pub elapsed_seconds: f64,
    pub status: String,
}

/// Aggregate over the instances of one setting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryRow {
    pub setting: String,
    pub variant: String,
    pub method: String,
    pub instances: usize,
    pub pct_opt: String,
    pub max_gap_pct: String,
    pub mean_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantRow {
    pub check: String,
    pub variant: String,
    pub cases: usize,
    pub violations: usize,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutput {
    pub rows: Vec<BenchRow>,
    pub summary: Vec<SummaryRow>,
    pub invariants: Vec<InvariantRow>,
}

pub fn write_csv<T: Serialize>(rows: &[T]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).expect("in-memory CSV");
    }
    String::from_utf8(writer.into_inner().expect("in-memory CSV")).expect("UTF-8 CSV")
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} worker threads: {e}")))
}

fn render<P: Scalar + Display>(value: &P) -> (String, String) {
    match value.as_rational() {
        Some(r) => (decimal(&r), fraction(&r)),
        None => (format!("{:.*e}", DISPLAY_DIGITS - 1, value.to_f64()), value.to_string()),
    }
}

fn gap_of<P: Scalar>(value: &P, optimum: &P) -> Option<Rational> {
    if optimum.is_zero() {
        return Some(if value.is_zero() { ratio(0, 1) } else { ratio(1, 1) });
    }
    ((value.clone() - optimum.clone()) / optimum.clone()).as_rational()
}

struct Run<P> {
    report: SolveReport<P>,
    seconds: f64,
}

fn timed<P>(f: impl FnOnce() -> SolveReport<P>) -> Run<P> {
    let start = Instant::now();
    let report = f();
    Run {
        report,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn row<P: Scalar + Display>(id: &str, instance: &Instance<P>, run: &Run<P>, optimum: Option<&P>) -> BenchRow {
    let (objective, objective_exact) = render(&run.report.objective);
    let gap = optimum.and_then(|opt| gap_of(&run.report.objective, opt));
    // Every row must be re-derivable from its schedule.
    let consistent = evaluate(instance, &run.report.schedule).is_ok_and(|v| v == run.report.objective);
    BenchRow {
        instance: id.to_string(),
        variant: instance.variant().name().into(),
        m: instance.machines(),
        t: instance.deadline(),
        n: instance.n(),
        method: run.report.method.name().into(),
        objective,
        objective_exact,
        gap: gap.as_ref().map(decimal),
        gap_exact: gap.as_ref().map(fraction),
        elapsed_seconds: run.seconds,
        status: if consistent {
            run.report.status.to_string()
        } else {
            "inconsistent".into()
        },
    }
}

fn oracle<P: Scalar>(instance: &Instance<P>) -> Result<SolveReport<P>, CliError> {
    brute_force_optimum(instance, DEFAULT_NODE_LIMIT).map_err(|e| CliError::SizeGuard(e.to_string()))
}

fn summarize(setting: &str, rows: &[&BenchRow], method: &str) -> SummaryRow {
    let selected: Vec<&&BenchRow> = rows.iter().filter(|r| r.method == method).collect();
    let gaps: Vec<Rational> = selected
        .iter()
        .filter_map(|r| r.gap_exact.as_deref())
        .filter_map(tctp_core::scalar::parse_rational)
        .collect();
    let optimal = gaps.iter().filter(|g| **g == ratio(0, 1)).count();
    let max_gap = gaps.iter().max().cloned().unwrap_or_else(|| ratio(0, 1));
    let pct = |k: usize, total: usize| {
        if total == 0 {
            "".to_string()
        } else {
            format!("{:.2}", 100.0 * k as f64 / total as f64)
        }
    };
    let mean = selected.iter().map(|r| r.elapsed_seconds).sum::<f64>() / selected.len().max(1) as f64;
    SummaryRow {
        setting: setting.into(),
        variant: selected.first().map(|r| r.variant.clone()).unwrap_or_default(),
        method: method.into(),
        instances: selected.len(),
        pct_opt: pct(optimal, gaps.len()),
        max_gap_pct: format!("{:.4}", max_gap.to_f64() * 100.0),
        mean_seconds: mean,
    }
}

/// Shapes of the local-search table at desk scale: `m, T >= 2`, `n = mT <= 10`.
pub const TABLE4_SHAPES: [(usize, usize); 8] = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2), (5, 2)];

fn q_config(m: usize, t: usize, seed: u64, q: usize) -> GenConfig {
    let mut config = GenConfig::new(m, t, seed);
    let (lo, hi, den) = Q_RANGES[q];
    config.q_range = (ratio(lo, den), ratio(hi, den));
    config
}

struct Job {
    id: String,
    setting: String,
    instance: Instance,
}

/// Multi-start local search against the oracle. Per shape: `count`
/// testing instances for each q range and `count` search instances.
pub fn table4(seed: u64, count: usize, jobs: usize) -> Result<SuiteOutput, CliError> {
    let mut work = Vec::new();
    let mut next_seed = seed;
    for &(m, t) in &TABLE4_SHAPES {
        for q in 0..3 {
            for _ in 0..count {
                let instance = gen_random(&q_config(m, t, next_seed, q), true).map_err(|e| CliError::Usage(e.to_string()))?;
                work.push(Job {
                    id: format!("t4-testing-m{m}-T{t}-q{q}-s{next_seed}"),
                    setting: format!("m={m} T={t}"),
                    instance,
                });
                next_seed += 1;
            }
        }
        for _ in 0..count {
            let instance = gen_random(&GenConfig::new(m, t, next_seed), false).map_err(|e| CliError::Usage(e.to_string()))?;
            work.push(Job {
                id: format!("t4-search-m{m}-T{t}-s{next_seed}"),
                setting: format!("m={m} T={t}"),
                instance,
            });
            next_seed += 1;
        }
    }
    let rows: Vec<Vec<BenchRow>> = pool(jobs)?.install(|| {
        work.par_iter()
            .map(|job| {
                let exact = timed(|| oracle(&job.instance).expect("desk-scale instance"));
                let ms = timed(|| multi_start(&job.instance));
                vec![
                    row(&job.id, &job.instance, &exact, Some(&exact.report.objective)),
                    row(&job.id, &job.instance, &ms, Some(&exact.report.objective)),
                ]
            })
            .collect()
    });
    let rows: Vec<BenchRow> = rows.into_iter().flatten().collect();

    let mut summary = Vec::new();
    for variant in [Variant::Testing, Variant::Search] {
        let mut settings: Vec<String> = Vec::new();
        for job in &work {
            if !settings.contains(&job.setting) {
                settings.push(job.setting.clone());
            }
        }
        for setting in settings.iter().map(String::as_str).chain(["all"]) {
            let selected: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| r.variant == variant.name())
                .filter(|r| setting == "all" || format!("m={} T={}", r.m, r.t) == setting)
                .collect();
            summary.push(summarize(setting, &selected, "multistart"));
        }
    }
    Ok(SuiteOutput {
        rows,
        summary,
        invariants: Vec::new(),
    })
}

/// Default cost ranges of the two-slot runtime table.
pub const TABLE5_RANGES: [u64; 4] = [10, 100, 1000, 10_000];

/// Two-slot DP runtime against the cost range; DP objectives are checked
/// against the oracle, timings are only reported.
pub fn table5(seed: u64, ranges: &[u64], reps: usize, machines: usize, jobs: usize) -> Result<SuiteOutput, CliError> {
    let mut work = Vec::new();
    for (r, &cmax) in ranges.iter().enumerate() {
        for rep in 0..reps {
            for testing in [true, false] {
                let s = seed + (r * reps + rep) as u64;
                let mut config = q_config(machines, 2, s, rep % 3);
                config.cost_range = (0, cmax);
                let instance = gen_random(&config, testing).map_err(|e| CliError::Usage(e.to_string()))?;
                let variant = if testing { "testing" } else { "search" };
                work.push(Job {
                    id: format!("t5-{variant}-c{cmax}-s{s}"),
                    setting: format!("[0,{cmax}]"),
                    instance,
                });
            }
        }
    }
    let rows: Vec<Vec<BenchRow>> = pool(jobs)?.install(|| {
        work.par_iter()
            .map(|job| {
                let exact = timed(|| oracle(&job.instance).expect("desk-scale instance"));
                let dp = timed(|| dp_two_slots(&job.instance).expect("two-slot instance"));
                let ms = timed(|| multi_start(&job.instance));
                let opt = &exact.report.objective;
                vec![
                    row(&job.id, &job.instance, &exact, Some(opt)),
                    row(&job.id, &job.instance, &dp, Some(opt)),
                    row(&job.id, &job.instance, &ms, Some(opt)),
                ]
            })
            .collect()
    });
    let rows: Vec<BenchRow> = rows.into_iter().flatten().collect();
    let mut summary = Vec::new();
    for &cmax in ranges {
        let setting = format!("[0,{cmax}]");
        for variant in [Variant::Testing, Variant::Search] {
            let selected: Vec<&BenchRow> = rows
                .iter()
                .zip(work.iter().flat_map(|j| [j, j, j]))
                .filter(|(r, j)| j.setting == setting && r.variant == variant.name())
                .map(|(r, _)| r)
                .collect();
            for method in ["dp2", "multistart"] {
                summary.push(summarize(&setting, &selected, method));
            }
        }
    }
    Ok(SuiteOutput {
        rows,
        summary,
        invariants: Vec::new(),
    })
}

/// The adversarial families: greedy against the oracle, and local search
/// started from the planted local optimum against the oracle.
pub fn gap_families() -> Result<SuiteOutput, CliError> {
    let mut rows = Vec::new();
    for big_m in [10u64, 100, 1000] {
        let inst = gen_greedy_gap(big_m).map_err(|e| CliError::Usage(e.to_string()))?;
        let id = format!("greedy-gap-M{big_m}");
        let exact = timed(|| oracle(&inst).expect("three tests"));
        let greedy = timed(|| greedy_min_ratio(&inst, DEFAULT_SUBSET_CAP).expect("three tests"));
        let opt = exact.report.objective.clone();
        rows.push(row(&id, &inst, &exact, Some(&opt)));
        rows.push(row(&id, &inst, &greedy, Some(&opt)));
    }
    for (c, k) in [(2u64, 2u32), (2, 3), (3, 3)] {
        let gap = gen_locality_gap(c, k).map_err(|e| CliError::Usage(e.to_string()))?;
        let inst = &gap.instance;
        let id = format!("locality-gap-c{c}-k{k}-M{}", gap.big_m);
        let exact = timed(|| brute_force_optimum(inst, DEFAULT_NODE_LIMIT).expect("small family"));
        let ls = timed(|| local_search(inst, &Partition::from_schedule(&gap.local)));
        let ms = timed(|| multi_start(inst));
        let opt = exact.report.objective.clone();
        rows.push(row(&id, inst, &exact, Some(&opt)));
        rows.push(row(&id, inst, &ls, Some(&opt)));
        rows.push(row(&id, inst, &ms, Some(&opt)));
    }
    Ok(SuiteOutput {
        rows,
        summary: Vec::new(),
        invariants: Vec::new(),
    })
}

fn random_instance(rng: &mut ChaCha8Rng, testing: bool, max_n: usize) -> Instance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=n);
    let t = rng.gen_range(n.div_ceil(m)..=n);
    let costs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=10)).collect();
    if testing {
        let probs = (0..n).map(|_| ratio(rng.gen_range(0..=20), 20)).collect();
        Instance::testing(m, t, costs, probs).expect("valid dimensions")
    } else {
        let mut weights: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=20)).collect();
        if weights.iter().all(|&w| w == 0) {
            weights[0] = 1;
        }
        Instance::search(m, t, costs, weights).expect("valid dimensions")
    }
}

fn random_schedule(rng: &mut ChaCha8Rng, inst: &Instance) -> Schedule {
    let mut slots = vec![Vec::new(); inst.deadline()];
    for j in 0..inst.n() {
        let open: Vec<usize> = (0..inst.deadline()).filter(|&s| slots[s].len() < inst.machines()).collect();
        slots[open[rng.gen_range(0..open.len())]].push(j);
    }
    Schedule::new(slots)
}

/// Structural properties on seeded random instances: ratio sorting never
/// hurts, the product lower bound on the optimum (testing), an optimum that
/// uses every slot exists, and the two-slot DP equals the oracle.
pub fn invariants(seed: u64, cases: usize, jobs: usize) -> Result<SuiteOutput, CliError> {
    type Check = fn(&mut ChaCha8Rng, bool) -> Option<bool>;
    let checks: [(&str, Check); 4] = [
        ("ratio-sort-never-hurts", |rng, testing| {
            let inst = random_instance(rng, testing, 8);
            let s = random_schedule(rng, &inst);
            let sorted = sort_by_ratio(&inst, &s).ok()?;
            Some(evaluate(&inst, &sorted).ok()? <= evaluate(&inst, &s).ok()?)
        }),
        ("product-lower-bound", |rng, testing| {
            if !testing {
                return None;
            }
            let inst = random_instance(rng, true, 7);
            let s = random_schedule(rng, &inst);
            let all: Vec<usize> = (0..inst.n()).collect();
            let opt = oracle(&inst).ok()?.objective;
            Some(opt >= evaluate(&inst, &s).ok()? * inst.survival(&all))
        }),
        ("all-slots-used-optimum", |rng, testing| {
            let inst = random_instance(rng, testing, 8);
            let mut best: Option<Rational> = None;
            for_each_partition(inst.n(), inst.machines(), inst.deadline(), |blocks| {
                if blocks.len() == inst.deadline() {
                    let sorted = sort_by_ratio(&inst, &Schedule::new(blocks.to_vec())).expect("valid");
                    let v = evaluate(&inst, &sorted).expect("valid");
                    if best.as_ref().map_or(true, |b| v < *b) {
                        best = Some(v);
                    }
                }
            });
            Some(best == Some(oracle(&inst).ok()?.objective))
        }),
        ("dp-equals-oracle", |rng, testing| {
            let m = rng.gen_range(1..=6usize);
            let n = rng.gen_range(m.max(2)..=2 * m);
            let costs: Vec<u64> = (0..n).map(|_| rng.gen_range(0..=50)).collect();
            let inst = if testing {
                Instance::testing(m, 2, costs, (0..n).map(|_| ratio(rng.gen_range(0..=20), 20)).collect()).ok()?
            } else {
                let w = (0..n).map(|j| if j == 0 { 1 } else { rng.gen_range(0..=20) }).collect();
                Instance::search(m, 2, costs, w).ok()?
            };
            Some(dp_two_slots(&inst).ok()?.objective == oracle(&inst).ok()?.objective)
        }),
    ];
    let mut work = Vec::new();
    for (c, (name, check)) in checks.iter().enumerate() {
        for (v, testing) in [true, false].into_iter().enumerate() {
            work.push((*name, *check, testing, seed.wrapping_add((c * 2 + v) as u64)));
        }
    }
    let counts: Vec<Option<InvariantRow>> = pool(jobs)?.install(|| {
        work.par_iter()
            .map(|&(name, check, testing, s)| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                let mut ran = 0;
                let mut violations = 0;
                for _ in 0..cases {
                    match check(&mut rng, testing) {
                        Some(ok) => {
                            ran += 1;
                            if !ok {
                                violations += 1;
                            }
                        }
                        None => continue,
                    }
                }
                (ran > 0).then(|| InvariantRow {
                    check: name.into(),
                    variant: if testing { "testing" } else { "search" }.into(),
                    cases: ran,
                    violations,
                })
            })
            .collect()
    });
    Ok(SuiteOutput {
        rows: Vec::new(),
        summary: Vec::new(),
        invariants: counts.into_iter().flatten().collect(),
    })
}
