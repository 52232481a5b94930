//! Command-line front end. [`run`] returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tctp_core::exact::{brute_force_optimum, dp_two_slots, fptas_two_slots, ExactError, DEFAULT_NODE_LIMIT};
use tctp_core::heuristics::{greedy_min_ratio, initial_partitions, local_search, multi_start, DEFAULT_SUBSET_CAP};
use tctp_core::instgen::{check_reduction, gen_random, reduce_search_to_testing, GenConfig};
use tctp_core::mip::{
    add_precedence, add_slot_costs, build, emit_lp, parse_lp, point_to_schedule, verify_point, Formulation, LinearModel,
    MipError, ModelKind, VarKind,
};
use tctp_core::scalar::parse_rational;
use tctp_core::{evaluate, Instance, Method, Rational, SolveReport, Variant};

use crate::bench::{self, write_csv};
use crate::error::CliError;
use crate::files::{
    complete_point, decimal, fraction, parse_beta, parse_precedence, parse_solution, read_instance, read_text,
    write_instance, write_text, Manifest, ManifestEntry, ReportFile,
};

/// Largest search instance `verify-reduction` enumerates.
pub const REDUCTION_MAX_N: usize = 6;

#[derive(Debug, Parser)]
#[command(name = "tctp", version, about = "Time-critical testing and search: solvers, MIP export and benchmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write seeded random instances and a manifest.
    Generate(GenerateArgs),
    /// Solve an instance with one method.
    Solve(SolveArgs),
    /// Write an LP model and its variable sidecar.
    EmitMip(EmitMipArgs),
    /// Check an external solver's solution against an LP model.
    VerifyPoint(VerifyPointArgs),
    /// Exhaustively check the search-to-testing reduction on a small instance.
    VerifyReduction(VerifyReductionArgs),
    /// Run a benchmark suite and write CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Testing,
    Search,
}

impl VariantArg {
    fn variant(self) -> Variant {
        match self {
            VariantArg::Testing => Variant::Testing,
            VariantArg::Search => Variant::Search,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FormulationArg {
    Po,
    Assign,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Table4,
    Table5,
    Gapfamilies,
    Invariants,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    #[arg(long)]
    pub m: usize,
    #[arg(long = "T")]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of instances; seeds run from `--seed` upwards.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    /// Joint success probability range `lo,hi` (testing only).
    #[arg(long = "q-range")]
    pub q_range: Option<String>,
    #[arg(long = "cost-max", default_value_t = 10)]
    pub cost_max: u64,
    #[arg(long = "weight-max", default_value_t = 1000)]
    pub weight_max: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// oracle, dp2, fptas, greedy, localsearch or multistart.
    #[arg(long)]
    pub method: String,
    /// Fails unless the instance has this variant.
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Approximation parameter for fptas, e.g. `1/10`.
    #[arg(long, default_value = "1/10")]
    pub epsilon: String,
    /// Oracle enumeration guard (number of partitions).
    #[arg(long = "node-limit", default_value_t = DEFAULT_NODE_LIMIT)]
    pub node_limit: u128,
    /// Greedy enumeration guard (number of subsets per slot).
    #[arg(long = "subset-cap", default_value_t = DEFAULT_SUBSET_CAP)]
    pub subset_cap: u128,
    /// Report file (JSON); the summary always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EmitMipArgs {
    #[arg(long)]
    pub instance: PathBuf,
    #[arg(long, value_enum)]
    pub formulation: FormulationArg,
    #[arg(long, value_enum)]
    pub variant: Option<VariantArg>,
    /// Arc list, one `i j` pair of 1-based tests per line (po only).
    #[arg(long)]
    pub precedence: Option<PathBuf>,
    /// T slot costs (assign only).
    #[arg(long)]
    pub beta: Option<PathBuf>,
    /// LP file; the sidecar is written next to it with extension `.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyPointArgs {
    /// LP file written by `emit-mip`.
    #[arg(long)]
    pub model: PathBuf,
    /// Solver solution: `name value` or `index name value ...` lines.
    #[arg(long)]
    pub solution: PathBuf,
    /// Violations up to this amount are accepted.
    #[arg(long, default_value = "0")]
    pub tolerance: String,
    /// Instance to re-evaluate the decoded schedule on.
    #[arg(long)]
    pub instance: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyReductionArgs {
    #[arg(long)]
    pub instance: PathBuf,
    /// Search cost threshold, e.g. `2` or `7/3`.
    #[arg(long)]
    pub alpha: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Instances per setting (table4, table5) or cases per check (invariants).
    #[arg(long)]
    pub count: Option<usize>,
    /// Machines for table5 (T = 2).
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    /// Upper ends of the table5 cost ranges, comma separated.
    #[arg(long)]
    pub ranges: Option<String>,
    /// Row CSV; a summary CSV is written next to it as `<stem>_summary.csv`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses and runs one invocation. Help and usage errors are printed here.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { CliError::USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command, out: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Generate(args) => generate(args, out),
        Command::Solve(args) => solve(args, out),
        Command::EmitMip(args) => emit_mip(args, out),
        Command::VerifyPoint(args) => verify(args, out),
        Command::VerifyReduction(args) => verify_reduction(args, out),
        Command::Bench(args) => run_bench(args, out),
    }
}

fn say(out: &mut dyn Write, text: impl AsRef<str>) -> Result<(), CliError> {
    writeln!(out, "{}", text.as_ref()).map_err(|e| CliError::io("<stdout>", e))
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| CliError::Usage(format!("--{name}: `{text}` is not a rational")))
}

fn check_variant(instance: &Instance, expected: Option<VariantArg>) -> Result<(), CliError> {
    match expected {
        Some(v) if v.variant() != instance.variant() => Err(CliError::Usage(format!(
            "--variant {} but the instance is a {} instance",
            v.variant().name(),
            instance.variant().name()
        ))),
        _ => Ok(()),
    }
}

fn generate(args: GenerateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let variant = args.variant.variant();
    let mut manifest = Manifest::default();
    for k in 0..args.count {
        let seed = args.seed + k;
        let mut config = GenConfig::new(args.m, args.t, seed);
        config.cost_range = (0, args.cost_max);
        config.weight_range = (0, args.weight_max);
        if let Some(q) = &args.q_range {
            let (lo, hi) = q
                .split_once(',')
                .ok_or_else(|| CliError::Usage("--q-range expects `lo,hi`".into()))?;
            config.q_range = (rational_arg("q-range", lo)?, rational_arg("q-range", hi)?);
        }
        let instance = gen_random(&config, variant == Variant::Testing).map_err(|e| CliError::Usage(e.to_string()))?;
        let file = format!("{}-m{}-T{}-s{seed}.json", variant.name(), args.m, args.t);
        write_instance(&args.out.join(&file), &instance)?;
        manifest.instances.push(ManifestEntry::new(file, variant, &config));
    }
    write_text(&args.out.join("manifest.json"), &manifest.to_json())?;
    say(
        out,
        format!("wrote {} instance(s) and manifest.json to {}", args.count, args.out.display()),
    )
}

fn exact_error(e: ExactError) -> CliError {
    match e {
        ExactError::TooLarge { .. } | ExactError::BudgetTooLarge(_) => CliError::SizeGuard(e.to_string()),
        ExactError::DeadlineNotTwo(_) | ExactError::NonPositiveEpsilon => CliError::Usage(e.to_string()),
    }
}

fn solve(args: SolveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let method = Method::from_name(&args.method).ok_or_else(|| CliError::UnknownMethod(args.method.clone()))?;
    let instance = read_instance(&args.instance)?;
    check_variant(&instance, args.variant)?;
    let start = Instant::now();
    let mut report: SolveReport = match method {
        Method::Oracle => brute_force_optimum(&instance, args.node_limit).map_err(exact_error)?,
        Method::Dp2 => dp_two_slots(&instance).map_err(exact_error)?,
        Method::Fptas => {
            let eps = rational_arg("epsilon", &args.epsilon)?;
            fptas_two_slots(&instance, &eps).map_err(exact_error)?
        }
        Method::Greedy => {
            greedy_min_ratio(&instance, args.subset_cap).map_err(|e| CliError::SizeGuard(e.to_string()))?
        }
        Method::LocalSearch => {
            // Single run from the first (cost-ordered) initial partition.
            let [start, ..] = initial_partitions(&instance);
            local_search(&instance, &start)
        }
        Method::MultiStart => multi_start(&instance),
    };
    report.elapsed = Some(start.elapsed().as_secs_f64());
    let file = ReportFile::from_report(&report);
    if let Some(path) = &args.out {
        write_text(path, &file.to_json())?;
    }
    say(out, format!("method: {}", report.method))?;
    say(out, format!("status: {}", report.status))?;
    say(
        out,
        format!("objective: {} ({})", decimal(&report.objective), fraction(&report.objective)),
    )?;
    say(out, format!("schedule: {}", report.schedule))?;
    say(out, format!("elapsed: {:.6} s", report.elapsed.unwrap_or(0.0)))
}

/// Meaning of one model variable, for mapping solver output back to tests
/// and slots. Tests and slots are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SidecarVariable {
    pub name: String,
    pub kind: String,
    pub role: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub test: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub other: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub slot: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub position: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Sidecar {
    pub model: String,
    pub formulation: String,
    pub variant: String,
    pub n: usize,
    pub original_n: usize,
    pub m: usize,
    #[serde(rename = "T")]
    pub t: usize,
    /// Tests `original_n + 1..=n` are padding and are dropped when decoding.
    pub variables: Vec<SidecarVariable>,
}

fn describe(name: &str, kind: VarKind) -> SidecarVariable {
    let parts: Vec<&str> = name.split('_').collect();
    let num = |i: usize| parts.get(i).and_then(|s| s.parse::<usize>().ok());
    let mut v = SidecarVariable {
        name: name.to_string(),
        kind: match kind {
            VarKind::Binary => "binary",
            VarKind::Continuous => "continuous",
        }
        .into(),
        role: String::new(),
        test: None,
        other: None,
        slot: None,
        position: None,
    };
    match parts[0] {
        "d" => (v.role, v.test, v.other) = ("before".into(), num(1), num(2)),
        "mu" => (v.role, v.test, v.other) = ("same_slot".into(), num(1), num(2)),
        "a" if parts.len() == 3 => (v.role, v.test, v.position) = ("performed_given_later_pass".into(), num(1), num(2)),
        "a" => (v.role, v.test) = ("performed".into(), num(1)),
        "x" => (v.role, v.test, v.slot) = ("assigned".into(), num(1), num(2)),
        "y" => (v.role, v.test) = ("performed".into(), num(1)),
        "z" => (v.role, v.position, v.slot) = ("reach_given_later_pass".into(), num(1), num(2)),
        "zt" => (v.role, v.slot) = ("unresolved_mass".into(), num(1)),
        "u" => (v.role, v.slot) = ("slot_reached".into(), num(1)),
        _ => v.role = "other".into(),
    }
    v
}

pub fn sidecar(model: &LinearModel) -> Option<Sidecar> {
    let kind = model.kind?;
    Some(Sidecar {
        model: kind.to_string(),
        formulation: kind.formulation.name().into(),
        variant: kind.variant.name().into(),
        n: kind.n,
        original_n: kind.original_n,
        m: kind.machines,
        t: kind.deadline,
        variables: model.variables().iter().map(|v| describe(&v.name, v.kind)).collect(),
    })
}

fn sidecar_path(lp: &Path) -> PathBuf {
    lp.with_extension("json")
}

fn mip_error(e: MipError) -> CliError {
    CliError::Usage(e.to_string())
}

fn emit_mip(args: EmitMipArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    check_variant(&instance, args.variant)?;
    let formulation = match args.formulation {
        FormulationArg::Po => Formulation::PartialOrder,
        FormulationArg::Assign => Formulation::Assignment,
    };
    let mut model = build(formulation, &instance).map_err(mip_error)?;
    if let Some(path) = &args.precedence {
        let arcs = parse_precedence(&read_text(path)?)?;
        model = add_precedence(&model, &arcs).map_err(mip_error)?;
    }
    if let Some(path) = &args.beta {
        let beta = parse_beta(&read_text(path)?)?;
        model = add_slot_costs(&model, &beta).map_err(mip_error)?;
    }
    let text = emit_lp(&model);
    match &args.out {
        Some(path) => {
            write_text(path, &text)?;
            let meta = sidecar(&model).expect("built models carry their kind");
            let json = serde_json::to_string_pretty(&meta).expect("serializable") + "\n";
            let meta_path = sidecar_path(path);
            write_text(&meta_path, &json)?;
            say(
                out,
                format!(
                    "wrote {} ({} variables, {} constraints) and {}",
                    path.display(),
                    model.variables().len(),
                    model.constraints().len(),
                    meta_path.display()
                ),
            )
        }
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn verify(args: VerifyPointArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = read_text(&args.model)?;
    let model = parse_lp(&text).map_err(|e| CliError::Parse(format!("{}: {e}", args.model.display())))?;
    let meta_path = sidecar_path(&args.model);
    if meta_path.exists() {
        let meta: Sidecar = serde_json::from_str(&read_text(&meta_path)?)
            .map_err(|e| CliError::Parse(format!("{}: {e}", meta_path.display())))?;
        if Some(meta.model.as_str()) != model.kind.map(|k: ModelKind| k.to_string()).as_deref() {
            return Err(CliError::Parse(format!(
                "{} describes `{}`, which does not match the model header",
                meta_path.display(),
                meta.model
            )));
        }
    }
    let tolerance = rational_arg("tolerance", &args.tolerance)?;
    let mut point = parse_solution(&read_text(&args.solution)?)?;
    let unknown = complete_point(&model, &mut point);
    if !unknown.is_empty() {
        say(out, format!("ignored {} unknown variable(s): {}", unknown.len(), unknown.join(", ")))?;
    }
    let check = verify_point(&model, &point).map_err(|e| CliError::Parse(e.to_string()))?;
    let serious: Vec<_> = check.violations.iter().filter(|v| -v.slack.clone() > tolerance).collect();
    say(out, format!("feasible: {}", if serious.is_empty() { "yes" } else { "no" }))?;
    say(
        out,
        format!("objective: {} ({})", decimal(&check.objective), fraction(&check.objective)),
    )?;
    say(out, format!("violations: {}", check.violations.len()))?;
    for v in &check.violations {
        say(
            out,
            format!(
                "  {}: lhs {} {} {} (slack {})",
                v.name,
                decimal(&v.lhs),
                v.sense.symbol(),
                decimal(&v.rhs),
                decimal(&v.slack)
            ),
        )?;
    }
    if let Some(schedule) = point_to_schedule(&model, &point) {
        say(out, format!("schedule: {schedule}"))?;
        if let Some(path) = &args.instance {
            let instance = read_instance(path)?;
            let value = evaluate(&instance, &schedule).map_err(|e| CliError::Infeasible(e.to_string()))?;
            say(out, format!("schedule objective: {} ({})", decimal(&value), fraction(&value)))?;
        }
    }
    if serious.is_empty() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(format!(
            "{} constraint(s) violated beyond tolerance",
            serious.len()
        )))
    }
}

fn verify_reduction(args: VerifyReductionArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    if instance.variant() != Variant::Search {
        return Err(CliError::Usage("verify-reduction needs a search instance".into()));
    }
    if instance.n() > REDUCTION_MAX_N {
        return Err(CliError::SizeGuard(format!(
            "n = {} exceeds {REDUCTION_MAX_N} for exhaustive checking",
            instance.n()
        )));
    }
    let alpha = rational_arg("alpha", &args.alpha)?;
    let (_, params) = reduce_search_to_testing(&instance, &alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    say(
        out,
        format!(
            "W = {}, M = {}, gamma = {}, beta = {}",
            params.w_scale,
            params.big_m,
            params.gamma,
            fraction(&params.beta)
        ),
    )?;
    let check = check_reduction(&instance, &alpha, u128::MAX).map_err(|e| CliError::SizeGuard(e.to_string()))?;
    if check.holds() {
        say(
            out,
            format!("equivalence holds for {}/{} schedules", check.agreements, check.schedules),
        )
    } else {
        for s in check.counterexamples.iter().take(10) {
            say(out, format!("counterexample: {s}"))?;
        }
        Err(CliError::VerificationFailed(format!(
            "equivalence fails for {}/{} schedules",
            check.counterexamples.len(),
            check.schedules
        )))
    }
}

fn summary_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}_summary.csv"))
}

fn run_bench(args: BenchArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if args.jobs == 0 {
        return Err(CliError::Usage("--jobs must be positive".into()));
    }
    let output = match args.suite {
        Suite::Table4 => bench::table4(args.seed, args.count.unwrap_or(10), args.jobs)?,
        Suite::Table5 => {
            let ranges = match &args.ranges {
                Some(text) => text
                    .split(',')
                    .map(|s| s.trim().parse::<u64>().map_err(|_| CliError::Usage(format!("--ranges: `{s}` is not an integer"))))
                    .collect::<Result<Vec<_>, _>>()?,
                None => bench::TABLE5_RANGES.to_vec(),
            };
            if args.m == 0 {
                return Err(CliError::Usage("--m must be positive".into()));
            }
            bench::table5(args.seed, &ranges, args.count.unwrap_or(5), args.m, args.jobs)?
        }
        Suite::Gapfamilies => bench::gap_families()?,
        Suite::Invariants => bench::invariants(args.seed, args.count.unwrap_or(200), args.jobs)?,
    };
    let (main, summary) = if args.suite == Suite::Invariants {
        (write_csv(&output.invariants), None)
    } else {
        let summary = (!output.summary.is_empty()).then(|| write_csv(&output.summary));
        (write_csv(&output.rows), summary)
    };
    match &args.out {
        Some(path) => {
            write_text(path, &main)?;
            say(out, format!("wrote {}", path.display()))?;
            if let Some(summary) = &summary {
                let p = summary_path(path);
                write_text(&p, summary)?;
                say(out, format!("wrote {}", p.display()))?;
                out.write_all(summary.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
            }
        }
        None => {
            out.write_all(main.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
            if let Some(summary) = &summary {
                say(out, "")?;
                out.write_all(summary.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
            }
        }
    }
    let violations: usize = output.invariants.iter().map(|r| r.violations).sum();
    let inconsistent = output.rows.iter().filter(|r| r.status == "inconsistent").count();
    if violations + inconsistent > 0 {
        return Err(CliError::VerificationFailed(format!(
            "{violations} invariant violation(s), {inconsistent} inconsistent row(s)"
        )));
    }
    Ok(())
}
