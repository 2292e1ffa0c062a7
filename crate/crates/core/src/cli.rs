//! Command-line front end.
//!
//! Exit codes: 0 success, 1 infeasible instance, 2 usage or schema error,
//! 3 exact-solver size limit exceeded.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classic::{self, FitPolicy, ItemId, ItemOrder, PackInstance, PackItem, PackSolution};
use crate::coloring::{self, ColoredGraph};
use crate::error::Error;
use crate::estimate::{self, MsEstimate};
use crate::io::{self, rational_value, Format, InstanceFile, MseModel, Report};
use crate::limits::ExactLimits;
use crate::mse_packing::{self, ModelKind, MseItem, MseSolution, Objective, ObjectiveValue};
use crate::oracle;
use crate::pipelines::{self, PeriodPolicy, SelectObjective};
use crate::relational::{self, ConflictGraph, SolveMode};
use crate::Rational;

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SIZE_LIMIT: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "multibin",
    version,
    about = "Bin packing, multiset estimates, coloring and planning solvers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Instance file.
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
    /// Bundled fixture, e.g. `table13` or `fig13_compat`.
    #[arg(long)]
    fixture: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "human")]
    format: OutputFormat,
    /// Run the matching brute-force oracle and append its verdict.
    #[arg(long)]
    oracle: bool,
    /// Record the wall time of the solve.
    #[arg(long)]
    timing: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Human,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the interval estimates of a scale.
    Scale {
        #[arg(long)]
        l: Option<usize>,
        #[arg(long)]
        eta: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Median of an estimate set.
    Median {
        #[arg(long, value_enum, default_value = "generalized")]
        algo: MedianAlgo,
        #[command(flatten)]
        common: Common,
    },
    /// Proximity between two estimates, or between all pairs of a set.
    Proximity {
        #[arg(long)]
        from: Option<String>,
        #[arg(long)]
        to: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Classic and relational bin packing.
    Pack {
        #[arg(long, value_enum, default_value = "ffd")]
        algo: PackAlgo,
        #[command(flatten)]
        common: Common,
    },
    /// Packing models with multiset-estimate objectives.
    Solve {
        #[arg(value_enum)]
        model: SolveModel,
        #[arg(long, value_enum, default_value = "integrated")]
        objective: ObjectiveArg,
        /// Report the (estimate, cardinality) front instead of one solution.
        #[arg(long)]
        front: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Graph coloring variants.
    Color {
        #[arg(value_enum)]
        task: ColorTask,
        /// Palette size for `count`.
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// One vertex per part, fewest colors.
    PartitionColor {
        #[command(flatten)]
        common: Common,
    },
    /// Planning pipelines.
    Pipeline {
        #[arg(value_enum)]
        task: PipelineTask,
        #[arg(long, value_enum, default_value = "select")]
        algo: MessageAlgo,
        #[arg(long, value_enum, default_value = "count")]
        objective: SelectArg,
        #[command(flatten)]
        common: Common,
    },
    /// Solve an instance with its default solver and check it by brute force.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
    /// Random instances: heuristic quality and solver/oracle agreement.
    Bench {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
        /// Items per instance.
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MedianAlgo {
    Generalized,
    Set,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PackAlgo {
    Nf,
    Ff,
    Bf,
    Wf,
    Nfd,
    Ffd,
    Bfd,
    Wfd,
    Exact,
    ConflictExact,
    ConflictGreedy,
    InverseExact,
    InverseGreedy,
    /// Check the solution stored in the file.
    Check,
    /// Reorder the stored solution's bins by precedence.
    Order,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
#[allow(clippy::enum_variant_names)]
enum SolveModel {
    KnapsackMse,
    MultipleChoiceMse,
    MultipleKnapsackMse,
    #[value(alias = "generalized-assignment-mse")]
    GapMse,
    InverseBppMse,
    ConflictInverseMse,
}

impl SolveModel {
    fn model(self) -> MseModel {
        match self {
            SolveModel::KnapsackMse => MseModel::Knapsack,
            SolveModel::MultipleChoiceMse => MseModel::MultipleChoice,
            SolveModel::MultipleKnapsackMse => MseModel::MultipleKnapsack,
            SolveModel::GapMse => MseModel::GeneralizedAssignment,
            SolveModel::InverseBppMse => MseModel::InverseBpp,
            SolveModel::ConflictInverseMse => MseModel::ConflictInverse,
        }
    }

    fn of(model: MseModel) -> SolveModel {
        match model {
            MseModel::Knapsack => SolveModel::KnapsackMse,
            MseModel::MultipleChoice => SolveModel::MultipleChoiceMse,
            MseModel::MultipleKnapsack => SolveModel::MultipleKnapsackMse,
            MseModel::GeneralizedAssignment => SolveModel::GapMse,
            MseModel::InverseBpp => SolveModel::InverseBppMse,
            MseModel::ConflictInverse => SolveModel::ConflictInverseMse,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Profit,
    Integrated,
    Median,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Profit => Objective::Profit,
            ObjectiveArg::Integrated => Objective::Integrated,
            ObjectiveArg::Median => Objective::Median,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ColorTask {
    Chromatic,
    Count,
    MinWeight,
    Compat,
    ColoredPack,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum PipelineTask {
    Paper,
    Messages,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MessageAlgo {
    Swf,
    Select,
    Layers,
    Simulate,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SelectArg {
    Count,
    CountAge,
    Importance,
    Estimate,
}

impl From<SelectArg> for SelectObjective {
    fn from(o: SelectArg) -> Self {
        match o {
            SelectArg::Count => SelectObjective::Count,
            SelectArg::CountAge => SelectObjective::CountAge,
            SelectArg::Importance => SelectObjective::Importance,
            SelectArg::Estimate => SelectObjective::Estimate,
        }
    }
}

/// A failed invocation: exit code and message.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            Error::SizeLimit { .. } => EXIT_SIZE_LIMIT,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// Runs one command. `args` excludes the program name.
pub fn run_command<I, T>(args: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("multibin")).chain(args.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutput {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let common = cli.command.common().clone();
    let limits = ExactLimits::from_env();
    let started = Instant::now();
    let result = execute(&cli.command, &limits).and_then(|report| {
        let report = if common.timing {
            Report {
                wall_time_ms: Some(started.elapsed().as_secs_f64() * 1e3),
                ..report
            }
        } else {
            report
        };
        let format = match common.format {
            OutputFormat::Human => Format::Human,
            OutputFormat::Machine => Format::Machine,
        };
        let text = io::emit_report(&report, format);
        match &common.out {
            Some(path) => std::fs::write(path, &text)
                .map(|_| String::new())
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
            None => Ok(text),
        }
    });
    match result {
        Ok(stdout) => CommandOutput {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        },
        Err(f) => CommandOutput {
            code: f.code,
            stdout: String::new(),
            stderr: format!("error: {}\n", f.message),
        },
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Scale { common, .. }
            | Command::Median { common, .. }
            | Command::Proximity { common, .. }
            | Command::Pack { common, .. }
            | Command::Solve { common, .. }
            | Command::Color { common, .. }
            | Command::PartitionColor { common }
            | Command::Pipeline { common, .. }
            | Command::Oracle { common }
            | Command::Bench { common, .. } => common,
        }
    }
}

fn load(common: &Common) -> Outcome<InstanceFile> {
    let text = match (&common.input, &common.fixture) {
        (Some(_), Some(_)) => return Err(usage("give either --in or --fixture, not both")),
        (Some(path), None) => {
            std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?
        }
        (None, Some(name)) => io::fixture(name)
            .ok_or_else(|| usage(format!("unknown fixture {name:?}")))?
            .to_string(),
        (None, None) => return Err(usage("an instance is required (--in FILE or --fixture NAME)")),
    };
    Ok(io::parse_instance(&text)?)
}

fn wrong_kind(file: &InstanceFile, wanted: &str) -> Failure {
    usage(format!("expected a {wanted} instance, found kind {:?}", file.kind()))
}

fn execute(command: &Command, limits: &ExactLimits) -> Outcome<Report> {
    match command {
        Command::Scale { l, eta, common } => {
            let file = match (l, eta) {
                (Some(l), Some(eta)) => InstanceFile::Scale(io::ScaleSpec { l: *l, eta: *eta }),
                (None, None) => load(common)?,
                _ => return Err(usage("--l and --eta go together")),
            };
            run_scale(&file, common.oracle)
        }
        Command::Median { algo, common } => run_median(&load(common)?, *algo, common.oracle),
        Command::Proximity { from, to, common } => {
            let file = match (from, to) {
                (Some(a), Some(b)) => {
                    let a: MsEstimate = a.parse()?;
                    let b: MsEstimate = b.parse()?;
                    InstanceFile::Estimates(io::EstimateSet {
                        l: a.l(),
                        eta: a.eta(),
                        estimates: vec![a, b],
                    })
                }
                (None, None) => load(common)?,
                _ => return Err(usage("--from and --to go together")),
            };
            run_proximity(&file, from.is_some(), common.oracle)
        }
        Command::Pack { algo, common } => run_pack(&load(common)?, *algo, common.oracle, limits),
        Command::Solve {
            model,
            objective,
            front,
            common,
        } => run_solve(
            &load(common)?,
            Some(*model),
            (*objective).into(),
            *front,
            common.oracle,
            limits,
        ),
        Command::Color { task, k, common } => run_color(&load(common)?, *task, *k, common.oracle, limits),
        Command::PartitionColor { common } => run_partition(&load(common)?, common.oracle, limits),
        Command::Pipeline {
            task,
            algo,
            objective,
            common,
        } => {
            let file = load(common)?;
            match task {
                PipelineTask::Paper => run_plan(&file, common.oracle, limits),
                PipelineTask::Messages => run_messages(&file, *algo, (*objective).into(), common.oracle, limits),
            }
        }
        Command::Oracle { common } => {
            let file = load(common)?;
            match &file {
                InstanceFile::Scale(_) => run_scale(&file, true),
                InstanceFile::Estimates(_) => run_median(&file, MedianAlgo::Generalized, true),
                InstanceFile::Pack(_) => run_pack(&file, PackAlgo::Exact, true, limits),
                InstanceFile::Mse(_) => run_solve(&file, None, Objective::Integrated, false, true, limits),
                InstanceFile::Graph(g) if !g.candidates.is_empty() => {
                    run_color(&file, ColorTask::Compat, None, true, limits)
                }
                InstanceFile::Graph(g) if g.parts.is_some() => run_partition(&file, true, limits),
                InstanceFile::Graph(g) if g.colors.is_some() => run_color(&file, ColorTask::Count, None, true, limits),
                InstanceFile::Graph(_) => run_color(&file, ColorTask::Chromatic, None, true, limits),
                InstanceFile::Colored(_) => run_color(&file, ColorTask::ColoredPack, None, true, limits),
                InstanceFile::Messages(_) => {
                    run_messages(&file, MessageAlgo::Select, SelectObjective::Count, true, limits)
                }
                InstanceFile::Production(_) => run_plan(&file, true, limits),
            }
        }
        Command::Bench { seed, count, n, common } => run_bench(*seed, *count, *n, common.oracle, limits),
    }
}

/// Parenthesized count notation `(c1,...,cl)`.
fn paren(e: &MsEstimate) -> String {
    let counts: Vec<String> = e.counts().iter().map(u32::to_string).collect();
    format!("({})", counts.join(","))
}

fn paren_opt(e: Option<&MsEstimate>) -> Value {
    e.map_or(Value::Null, |e| Value::String(paren(e)))
}

fn ids(list: &[ItemId]) -> Vec<u32> {
    list.iter().map(|i| i.0).collect()
}

fn bins_value(solution: &PackSolution) -> Value {
    json!({
        "bins": solution.bins.iter().map(|b| ids(b)).collect::<Vec<_>>(),
        "unassigned": ids(&solution.unassigned),
    })
}

fn run_scale(file: &InstanceFile, with_oracle: bool) -> Outcome<Report> {
    let InstanceFile::Scale(spec) = file else {
        return Err(wrong_kind(file, "scale"));
    };
    let scale = estimate::enumerate_scale(spec.l, spec.eta)?;
    let excluded: Vec<String> = estimate::enumerate_multisets(spec.l, spec.eta)?
        .iter()
        .filter(|e| !e.is_interval())
        .map(paren)
        .collect();
    let listed: Vec<String> = scale.iter().map(paren).collect();
    let mut report = Report::new("enumerate_scale", file)
        .metric("l", spec.l)
        .metric("eta", spec.eta)
        .metric("count", scale.len())
        .with_solution(json!({ "estimates": listed, "excluded": excluded }));
    if with_oracle {
        let mut expected: Vec<MsEstimate> = estimate::enumerate_multisets(spec.l, spec.eta)?
            .into_iter()
            .filter(MsEstimate::is_interval)
            .collect();
        expected.sort_by(estimate::canonical_cmp);
        let expected: Vec<String> = expected.iter().map(paren).collect();
        report = report.with_oracle("filtered multiset enumeration", expected, listed);
    }
    Ok(report)
}

fn run_median(file: &InstanceFile, algo: MedianAlgo, with_oracle: bool) -> Outcome<Report> {
    let InstanceFile::Estimates(spec) = file else {
        return Err(wrong_kind(file, "estimates"));
    };
    let set = spec.checked()?;
    let (median, cost) = match algo {
        MedianAlgo::Generalized => estimate::generalized_median_with_cost(set)?,
        MedianAlgo::Set => estimate::set_median_with_cost(set)?,
    };
    let name = match algo {
        MedianAlgo::Generalized => "generalized_median",
        MedianAlgo::Set => "set_median",
    };
    let mut report = Report::new(name, file)
        .objective("median", paren(&median))
        .objective("total_distance", cost)
        .metric("set_size", set.len());
    if with_oracle {
        let candidates = match algo {
            MedianAlgo::Generalized => estimate::enumerate_multisets(spec.l, spec.eta)?
                .into_iter()
                .filter(MsEstimate::is_interval)
                .collect(),
            MedianAlgo::Set => set.to_vec(),
        };
        let mut best = u64::MAX;
        for c in &candidates {
            let d: u64 = set
                .iter()
                .map(|e| oracle::step_distance(c, e))
                .sum::<crate::Result<u64>>()?;
            best = best.min(d);
        }
        report = report.with_oracle("exhaustive candidate scan", best, cost);
    }
    Ok(report)
}

fn run_proximity(file: &InstanceFile, single: bool, with_oracle: bool) -> Outcome<Report> {
    let InstanceFile::Estimates(spec) = file else {
        return Err(wrong_kind(file, "estimates"));
    };
    let set = spec.checked()?;
    let pairs: Vec<(usize, usize)> = if single {
        vec![(0, 1)]
    } else {
        (0..set.len())
            .flat_map(|i| (0..set.len()).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect()
    };
    let mut rows = Vec::new();
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    for &(i, j) in &pairs {
        let p = estimate::proximity(&set[i], &set[j])?;
        rows.push(json!({
            "from": paren(&set[i]),
            "to": paren(&set[j]),
            "delta_minus": p.delta_minus,
            "delta_plus": p.delta_plus,
            "magnitude": p.magnitude(),
        }));
        if with_oracle {
            let (minus, plus) = oracle::signed_split(&set[i], &set[j])?;
            expected.push((minus, plus, oracle::step_distance(&set[i], &set[j])?));
            observed.push((p.delta_minus, p.delta_plus, p.magnitude()));
        }
    }
    let mut report = Report::new("proximity", file).with_solution(json!({ "pairs": rows }));
    if single {
        let p = estimate::proximity(&set[0], &set[1])?;
        report = report
            .objective("delta_minus", p.delta_minus)
            .objective("delta_plus", p.delta_plus);
    }
    if with_oracle {
        report = report.with_oracle("signed sorted differences and step-graph BFS", expected, observed);
    }
    Ok(report)
}

fn fit(algo: PackAlgo) -> Option<(FitPolicy, ItemOrder, &'static str)> {
    use FitPolicy::*;
    use ItemOrder::*;
    Some(match algo {
        PackAlgo::Nf => (NextFit, AsGiven, "next_fit"),
        PackAlgo::Ff => (FirstFit, AsGiven, "first_fit"),
        PackAlgo::Bf => (BestFit, AsGiven, "best_fit"),
        PackAlgo::Wf => (WorstFit, AsGiven, "worst_fit"),
        PackAlgo::Nfd => (NextFit, Decreasing, "next_fit_decreasing"),
        PackAlgo::Ffd => (FirstFit, Decreasing, "first_fit_decreasing"),
        PackAlgo::Bfd => (BestFit, Decreasing, "best_fit_decreasing"),
        PackAlgo::Wfd => (WorstFit, Decreasing, "worst_fit_decreasing"),
        _ => return None,
    })
}

fn run_pack(file: &InstanceFile, algo: PackAlgo, with_oracle: bool, limits: &ExactLimits) -> Outcome<Report> {
    let InstanceFile::Pack(spec) = file else {
        return Err(wrong_kind(file, "pack"));
    };
    let instance = spec.instance()?;
    let relations = spec.relations()?;
    let conflicts = ConflictGraph::from_relations(&relations);
    let stored = || {
        spec.solution
            .clone()
            .ok_or_else(|| usage("this algorithm needs a \"solution\" in the instance"))
    };
    let mut profit = None;
    let (name, solution) = if let Some((policy, order, name)) = fit(algo) {
        (name, classic::fit_pack(&instance, policy, order))
    } else {
        match algo {
            PackAlgo::Exact => ("exact_min_bins", classic::exact_min_bins(&instance, limits)?),
            PackAlgo::ConflictExact => (
                "conflict_pack_exact",
                relational::conflict_pack(&instance, &conflicts, SolveMode::Exact, limits)?,
            ),
            PackAlgo::ConflictGreedy => (
                "conflict_pack_greedy",
                relational::conflict_pack(&instance, &conflicts, SolveMode::Greedy, limits)?,
            ),
            PackAlgo::InverseExact | PackAlgo::InverseGreedy => {
                let mode = if algo == PackAlgo::InverseExact {
                    SolveMode::Exact
                } else {
                    SolveMode::Greedy
                };
                let profits = spec.profits()?;
                let packed = relational::inverse_pack(&instance, profits.as_ref(), mode, limits)?;
                profit = Some(packed.profit);
                let name = if mode == SolveMode::Exact {
                    "inverse_pack_exact"
                } else {
                    "inverse_pack_greedy"
                };
                (name, packed.solution)
            }
            PackAlgo::Check => ("check", stored()?),
            PackAlgo::Order => (
                "order_within_bins",
                relational::order_within_bins(&stored()?, &relations.precedence)?,
            ),
            _ => unreachable!("fitting heuristics handled above"),
        }
    };
    // An optimal bin count above the cap proves that no packing fits it.
    if matches!(algo, PackAlgo::Exact | PackAlgo::ConflictExact) {
        if let Some(max) = instance.max_bins().filter(|&m| solution.bin_count() > m) {
            return Err(Error::Infeasible(format!(
                "at least {} bins are needed, at most {max} allowed",
                solution.bin_count()
            ))
            .into());
        }
    }
    let feasibility = classic::validate(&instance, &solution)?;
    let violations = relational::check_constraints(&instance, &relations, &solution)?;
    let mut report = Report::new(name, file)
        .objective("bins", solution.bin_count())
        .metric("lower_bound", classic::lower_bound(&instance))
        .metric("assigned", solution.assigned_count())
        .metric(
            "packing_violations",
            feasibility
                .violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        )
        .metric(
            "relation_violations",
            violations.iter().map(ToString::to_string).collect::<Vec<_>>(),
        )
        .with_solution(bins_value(&solution));
    if let Some(p) = profit {
        report = report.objective("profit", rational_value(p));
    }
    if with_oracle {
        report = match algo {
            PackAlgo::InverseExact | PackAlgo::InverseGreedy => {
                let best = oracle::inverse_pack_profit(&instance, spec.profits()?.as_ref())?;
                report.with_oracle(
                    "assignment enumeration (best profit)",
                    rational_value(best),
                    rational_value(profit.expect("inverse packing sets a profit")),
                )
            }
            PackAlgo::ConflictExact | PackAlgo::ConflictGreedy => {
                let best = oracle::min_bins(&instance, Some(&conflicts))?;
                report.with_oracle("set partition enumeration (fewest bins)", best, solution.bin_count())
            }
            _ => {
                let best = oracle::min_bins(&instance, None)?;
                report.with_oracle("set partition enumeration (fewest bins)", best, solution.bin_count())
            }
        };
    }
    Ok(report)
}

fn objective_value(v: &ObjectiveValue) -> Value {
    match v {
        ObjectiveValue::Scalar(s) => rational_value(*s),
        ObjectiveValue::Integrated(e) => Value::String(paren(e)),
        ObjectiveValue::Median(e) => paren_opt(e.as_ref()),
    }
}

fn assignment_rows(s: &MseSolution) -> Vec<Value> {
    s.assignment
        .iter()
        .map(|(id, bin)| json!({ "item": id.0, "bin": bin }))
        .collect()
}

fn run_solve(
    file: &InstanceFile,
    requested: Option<SolveModel>,
    objective: Objective,
    front: bool,
    with_oracle: bool,
    limits: &ExactLimits,
) -> Outcome<Report> {
    let InstanceFile::Mse(spec) = file else {
        return Err(wrong_kind(file, "mse"));
    };
    if let Some(m) = requested {
        if m.model() != spec.model {
            return Err(usage(format!(
                "the instance describes model {:?}, not {:?}",
                spec.model.name(),
                m.model().name()
            )));
        }
    }
    let model: ModelKind = spec.model()?;
    let items: Vec<MseItem> = spec.items()?;
    let name = format!("{:?}", SolveModel::of(spec.model))
        .chars()
        .fold(String::new(), |mut acc, c| {
            if c.is_uppercase() && !acc.is_empty() {
                acc.push('_');
            }
            acc.push(c.to_ascii_lowercase());
            acc
        });
    if front {
        let solutions = mse_packing::pareto_front_biobjective(&model, &items, objective, limits)?;
        let rows: Vec<Value> = solutions
            .iter()
            .map(|s| {
                json!({
                    "estimate": objective_value(&s.objective),
                    "cardinality": s.cardinality,
                    "items": ids(&s.selected()),
                })
            })
            .collect();
        let mut report = Report::new(format!("{name}_front"), file)
            .metric("front_size", solutions.len())
            .metric("front", rows);
        if with_oracle {
            let key = |e: Option<&MsEstimate>, c: usize| (e.map(paren), c);
            let mut expected: Vec<(Option<String>, usize)> = oracle::mse_front(&model, &items, objective)?
                .iter()
                .map(|(e, c)| key(e.as_ref(), *c))
                .collect();
            let mut observed: Vec<(Option<String>, usize)> = solutions
                .iter()
                .map(|s| key(s.objective.estimate(), s.cardinality))
                .collect();
            expected.sort();
            observed.sort();
            report = report.with_oracle("feasible-set dominance filter", expected, observed);
        }
        return Ok(report);
    }
    let solution = mse_packing::solve(&model, &items, objective, limits)?;
    let mut report = Report::new(name, file)
        .objective("value", objective_value(&solution.objective))
        .objective("cardinality", solution.cardinality)
        .with_solution(json!({ "assignment": assignment_rows(&solution) }));
    if with_oracle {
        let best = oracle::mse_best(&model, &items, objective)?
            .ok_or_else(|| Failure::from(Error::Infeasible("the oracle found no feasible solution".into())))?;
        let expected = json!({
            "value": best.scalar.map_or_else(|| paren_opt(best.estimate.as_ref()), rational_value),
            "cardinality": best.cardinality,
            "items": ids(&best.ids),
        });
        let observed = json!({
            "value": objective_value(&solution.objective),
            "cardinality": solution.cardinality,
            "items": ids(&solution.selected()),
        });
        report = report.with_oracle("assignment enumeration", expected, observed);
    }
    Ok(report)
}

fn vertex_names(cg: &ColoredGraph, vertices: &[usize]) -> Vec<String> {
    vertices.iter().map(|&v| cg.graph.names()[v].clone()).collect()
}

fn run_color(
    file: &InstanceFile,
    task: ColorTask,
    k: Option<usize>,
    with_oracle: bool,
    limits: &ExactLimits,
) -> Outcome<Report> {
    if task == ColorTask::ColoredPack {
        let InstanceFile::Colored(spec) = file else {
            return Err(wrong_kind(file, "colored"));
        };
        let items = spec.items();
        let packing = coloring::colored_pack(&items, spec.capacity.0, limits)?;
        let rows: Vec<Value> = packing
            .solution
            .bins
            .iter()
            .zip(&packing.bin_colors)
            .map(|(b, c)| json!({ "color": c, "items": ids(b) }))
            .collect();
        let mut report = Report::new("colored_pack", file)
            .objective("bins", packing.solution.bin_count())
            .objective("alpha", rational_value(packing.alpha))
            .objective("beta", rational_value(packing.beta))
            .metric("spans", &packing.spans)
            .with_solution(json!({ "bins": rows }));
        if with_oracle {
            let mut classes: BTreeMap<&str, Vec<PackItem>> = BTreeMap::new();
            for i in &items {
                classes.entry(i.color.as_str()).or_default().push(PackItem {
                    id: i.id,
                    weight: i.weight,
                });
            }
            let mut best = 0;
            for class in classes.into_values() {
                best += oracle::min_bins(&PackInstance::new(class, spec.capacity.0, None)?, None)?;
            }
            report = report.with_oracle(
                "per-color set partition enumeration",
                best,
                packing.solution.bin_count(),
            );
        }
        return Ok(report);
    }
    let InstanceFile::Graph(spec) = file else {
        return Err(wrong_kind(file, "graph"));
    };
    let cg = spec.colored_graph()?;
    let names = cg.graph.names().to_vec();
    let report = match task {
        ColorTask::Chromatic => {
            let (chi, colors) = coloring::chromatic_coloring(&cg.graph, None, limits)?;
            let mut report = Report::new("chromatic_coloring", file)
                .objective("colors", chi)
                .with_solution(coloring_rows(&names, &colors));
            if with_oracle {
                report = report.with_oracle("coloring enumeration", oracle::chromatic_number(&cg.graph)?, chi);
            }
            report
        }
        ColorTask::Count => {
            let k = k
                .or(spec.colors)
                .ok_or_else(|| usage("count needs --k or a \"colors\" field"))?;
            let count = coloring::count_proper_colorings(&cg.graph, k, limits)?;
            let mut report = Report::new("count_proper_colorings", file)
                .metric("k", k)
                .objective("count", count.to_string());
            if with_oracle {
                let expected = oracle::count_colorings(&cg.graph, k)?.to_string();
                report = report.with_oracle("coloring enumeration", expected, count.to_string());
            }
            report
        }
        ColorTask::MinWeight => {
            let front = coloring::min_weight_coloring(&cg.graph, &cg.color_weights, limits)?;
            let rows: Vec<Value> = front
                .iter()
                .map(|w| {
                    json!({
                        "total": w.total.iter().map(|&s| rational_value(s)).collect::<Vec<_>>(),
                        "used": w.used.iter().map(|&c| cg.palette[c].clone()).collect::<Vec<_>>(),
                        "coloring": w.coloring.iter().map(|&c| cg.palette[c].clone()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut report = Report::new("min_weight_coloring", file)
                .metric("front_size", front.len())
                .metric("front", rows);
            if with_oracle {
                let fmt = |v: &[Rational]| v.iter().map(|&s| rational_value(s)).collect::<Vec<_>>();
                let mut expected: Vec<Vec<Value>> = oracle::min_weight_front(&cg.graph, &cg.color_weights)?
                    .iter()
                    .map(|t| fmt(t))
                    .collect();
                let mut observed: Vec<Vec<Value>> = front.iter().map(|w| fmt(&w.total)).collect();
                let key = |v: &Vec<Value>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
                expected.sort_by_key(key);
                observed.sort_by_key(key);
                report = report.with_oracle("coloring enumeration", expected, observed);
            }
            report
        }
        ColorTask::Compat => {
            let front = coloring::compat_coloring_pareto(&cg, limits)?;
            let rows: Vec<Value> = front
                .iter()
                .map(|s| {
                    json!({
                        "configuration": format!("<{}>", s.colors.join(",")),
                        "N": s.quality.to_string(),
                    })
                })
                .collect();
            let mut report = Report::new("compat_coloring_pareto", file)
                .metric("front_size", front.len())
                .metric("front", rows);
            if with_oracle {
                let mut expected: Vec<(Vec<usize>, String)> = oracle::compat_front(&cg)?
                    .into_iter()
                    .map(|(c, q)| (c, q.to_string()))
                    .collect();
                let mut observed: Vec<(Vec<usize>, String)> = front
                    .iter()
                    .map(|s| (s.choice.clone(), s.quality.to_string()))
                    .collect();
                expected.sort();
                observed.sort();
                report = report.with_oracle("configuration enumeration", expected, observed);
            }
            report
        }
        ColorTask::ColoredPack => unreachable!("handled above"),
    };
    Ok(report)
}

fn coloring_rows(names: &[String], colors: &[usize]) -> Value {
    let rows: Vec<Value> = names
        .iter()
        .zip(colors)
        .map(|(n, c)| json!({ "vertex": n, "color": c + 1 }))
        .collect();
    json!({ "coloring": rows })
}

fn run_partition(file: &InstanceFile, with_oracle: bool, limits: &ExactLimits) -> Outcome<Report> {
    let InstanceFile::Graph(spec) = file else {
        return Err(wrong_kind(file, "graph"));
    };
    let cg = spec.colored_graph()?;
    let result = coloring::partition_coloring(&cg, limits)?;
    let names = vertex_names(&cg, &result.representatives);
    let mut report = Report::new("partition_coloring", file)
        .objective("colors", result.colors)
        .with_solution(coloring_rows(&names, &result.coloring));
    if with_oracle {
        report = report.with_oracle(
            "representative enumeration",
            oracle::partition_colors(&cg)?,
            result.colors,
        );
    }
    Ok(report)
}

fn run_plan(file: &InstanceFile, with_oracle: bool, limits: &ExactLimits) -> Outcome<Report> {
    let InstanceFile::Production(spec) = file else {
        return Err(wrong_kind(file, "production"));
    };
    let items = spec.items()?;
    let table = spec.table()?;
    let plan = pipelines::plan_paper(&items, &spec.settings(), &table, limits)?;
    let rows: Vec<Value> = plan
        .general_items
        .iter()
        .zip(&plan.slots)
        .map(|(g, s)| {
            let lanes: Vec<String> = g
                .lanes
                .iter()
                .map(|l| l.items.iter().map(ToString::to_string).collect::<Vec<_>>().join("+"))
                .collect();
            json!({
                "label": g.label,
                "color": g.color,
                "lanes": lanes.join(" "),
                "width": g.width(),
                "duration": g.duration(),
                "machine": s.machine,
                "period": s.period,
            })
        })
        .collect();
    let schedule: Vec<Value> = plan
        .schedule
        .iter()
        .enumerate()
        .flat_map(|(m, periods)| {
            let plan = &plan;
            periods.iter().enumerate().map(move |(p, gs)| {
                json!({
                    "machine": m + 1,
                    "period": p + 1,
                    "order": gs.iter().map(|&g| plan.general_items[g].label.clone()).collect::<Vec<_>>(),
                })
            })
        })
        .collect();
    let reference: Vec<(u32, String)> = spec
        .items
        .iter()
        .filter_map(|i| i.general_item.clone().map(|g| (i.id, g)))
        .collect();
    let mut report = Report::new("plan_paper", file)
        .objective("change_cost", plan.change_cost)
        .objective("periods", plan.periods())
        .metric("unused_area", plan.unused_area)
        .metric("idle_time", plan.idle_time)
        .metric("general_items", rows)
        .metric("schedule", schedule);
    if !reference.is_empty() {
        let same = reference
            .iter()
            .all(|(id, label)| plan.label_of(ItemId(*id)) == Some(label.as_str()));
        report = report.metric("matches_reference_labels", same);
    }
    if with_oracle {
        let mut best = 0;
        for machine in &plan.schedule {
            let mut last: Option<String> = None;
            for bin in machine {
                let colors: Vec<String> = bin.iter().map(|&g| plan.general_items[g].color.clone()).collect();
                best += oracle::order_colors_cost(&colors, &table, last.as_deref())?;
                if let Some(&g) = bin.last() {
                    last = Some(plan.general_items[g].color.clone());
                }
            }
        }
        report = report.with_oracle("order enumeration per machine period", best, plan.change_cost);
    }
    Ok(report)
}

fn schedule_value(s: &pipelines::Schedule) -> Value {
    json!({
        "order": ids(&s.order),
        "completion": s.completion.iter().map(|&c| rational_value(c)).collect::<Vec<_>>(),
    })
}

fn run_messages(
    file: &InstanceFile,
    algo: MessageAlgo,
    objective: SelectObjective,
    with_oracle: bool,
    limits: &ExactLimits,
) -> Outcome<Report> {
    let InstanceFile::Messages(spec) = file else {
        return Err(wrong_kind(file, "messages"));
    };
    let messages = spec.messages()?;
    let budget = spec.budget.0;
    let report = match algo {
        MessageAlgo::Swf => {
            let schedule = pipelines::swf_order(&messages);
            let mean = schedule.mean_completion()?;
            let mut report = Report::new("swf_order", file)
                .objective("mean_completion", rational_value(mean))
                .with_solution(schedule_value(&schedule));
            if with_oracle {
                let weights: Vec<Rational> = messages.iter().map(|m| m.weight).collect();
                let best = oracle::min_mean_completion(&weights)?;
                report = report.with_oracle("order enumeration", rational_value(best), rational_value(mean));
            }
            report
        }
        MessageAlgo::Select => {
            let selection = pipelines::select_messages(&messages, budget, objective, limits)?;
            let front: Vec<Value> = selection
                .front
                .iter()
                .map(|p| json!({ "ids": ids(&p.ids), "count": p.count, "total_age": p.total_age }))
                .collect();
            let mut report = Report::new("select_messages", file)
                .objective("count", selection.selected.order.len())
                .metric("front", front)
                .with_solution(json!({
                    "selected": schedule_value(&selection.selected),
                    "wait": selection.wait.iter().map(|m| json!({ "id": m.id.0, "age": m.wait_age })).collect::<Vec<_>>(),
                }));
            if with_oracle && objective == SelectObjective::Count {
                let best = oracle::max_message_count(&messages, budget)?;
                report = report.with_oracle("subset enumeration", best, selection.selected.order.len());
            }
            report
        }
        MessageAlgo::Layers => {
            let layered = pipelines::pareto_layer_assign(&messages, budget);
            let layers: Vec<Value> = layered
                .layers
                .iter()
                .map(|l| json!({ "members": ids(&l.members), "assigned": ids(&l.assigned) }))
                .collect();
            Report::new("pareto_layer_assign", file)
                .objective("count", layered.selected.len())
                .metric("layers", layers)
                .with_solution(json!({ "selected": ids(&layered.selected), "wait": ids(&layered.wait) }))
        }
        MessageAlgo::Simulate => {
            let periods = spec.periods.unwrap_or(1);
            let arrivals = spec.arrivals()?;
            let policy = PeriodPolicy::Select(objective);
            let records = pipelines::simulate_periods(&arrivals, periods, budget, policy, limits)?;
            let rows: Vec<Value> = records
                .iter()
                .map(|r| {
                    json!({
                        "period": r.period,
                        "processed": ids(&r.processed.order),
                        "waiting": r.wait.iter().map(|m| format!("{}@{}", m.id, m.wait_age)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            Report::new("simulate_periods", file)
                .metric("periods", periods)
                .metric("records", rows)
        }
    };
    Ok(report)
}

#[derive(Serialize, Default)]
struct BenchTally {
    instances: usize,
    ffd_optimal: usize,
    ffd_excess_max: usize,
    exact_matches_oracle: usize,
    knapsack_matches_oracle: usize,
}

/// Random instances with integer weights in `1..=10` and capacity 10, plus a
/// knapsack-mse instance on the scale `(3, 1)` per seed.
fn run_bench(seed: u64, count: usize, n: usize, with_oracle: bool, limits: &ExactLimits) -> Outcome<Report> {
    let file = InstanceFile::Scale(io::ScaleSpec { l: 3, eta: 1 });
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tally = BenchTally::default();
    let scale = estimate::enumerate_scale(3, 1)?;
    for _ in 0..count {
        let weights: Vec<Rational> = (0..n).map(|_| Rational::from_integer(rng.gen_range(1..=10))).collect();
        let instance = PackInstance::from_weights(&weights, Rational::from_integer(10))?;
        let ffd = classic::fit_pack(&instance, FitPolicy::FirstFit, ItemOrder::Decreasing).bin_count();
        let exact = classic::exact_min_bins(&instance, limits)?.bin_count();
        tally.instances += 1;
        if ffd == exact {
            tally.ffd_optimal += 1;
        }
        tally.ffd_excess_max = tally.ffd_excess_max.max(ffd - exact);
        let items: Vec<MseItem> = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| MseItem::new(i as u32 + 1, w).with_estimate(scale[rng.gen_range(0..scale.len())].clone()))
            .collect();
        let capacity = Rational::from_integer(rng.gen_range(5..=20));
        let sol = mse_packing::knapsack_mse(&items, capacity, Objective::Integrated, limits)?;
        if with_oracle {
            if oracle::min_bins(&instance, None)? == exact {
                tally.exact_matches_oracle += 1;
            }
            let model = ModelKind::Knapsack { capacity };
            let best = oracle::mse_best(&model, &items, Objective::Integrated)?;
            if best.is_some_and(|b| b.ids == sol.selected()) {
                tally.knapsack_matches_oracle += 1;
            }
        }
    }
    let mut report = Report::new("bench", &file)
        .metric("seed", seed)
        .metric("items_per_instance", n)
        .with_solution(&tally);
    if with_oracle {
        report = report.with_oracle(
            "brute-force agreement on every instance",
            [count, count],
            [tally.exact_matches_oracle, tally.knapsack_matches_oracle],
        );
    }
    Ok(report)
}
