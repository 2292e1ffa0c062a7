//! Acceptance suite: one pass/fail line per criterion. Every tolerance is
//! pinned below; all comparisons are exact.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use multibin::classic::{self, FitPolicy, ItemOrder};
use multibin::cli::run_command;
use multibin::coloring::{self, ColoredGraph};
use multibin::estimate::{self, Dominance, MsEstimate};
use multibin::io::{self, InstanceFile};
use multibin::limits::ExactLimits;
use multibin::mse_packing::{self, ModelKind, Objective};
use multibin::oracle;
use multibin::pipelines::{self, Message, PeriodPolicy, SelectObjective};
use multibin::relational::{self, RelationSet, SolveMode};
use multibin::{Error, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{est, q};

const SEEDS: u64 = 50;
const MAX_N: usize = 10;
const MAX_K: usize = 3;
const MEDIAN_SET_MAX: usize = 6;
const SWF_MAX_N: usize = 8;
const SIM_PERIODS: usize = 5;
const FFD_SLACK: usize = 2;
const ORACLE_SUITE_BUDGET: Duration = Duration::from_secs(60);

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixture(name: &str) -> InstanceFile {
    io::parse_instance(io::fixture(name).expect("bundled fixture")).expect("fixture parses")
}

fn graph_fixture(name: &str) -> ColoredGraph {
    match fixture(name) {
        InstanceFile::Graph(g) => g.colored_graph().expect("fixture graph"),
        other => panic!("{name} is a {} fixture", other.kind()),
    }
}

fn scale_enumeration() -> Check {
    let reference = [
        "(3,0,0)", "(2,1,0)", "(1,2,0)", "(0,3,0)", "(1,1,1)", "(0,2,1)", "(0,1,2)", "(0,0,3)",
    ];
    let reference: Vec<MsEstimate> = reference.iter().map(|s| est(s)).collect();
    let scale = estimate::enumerate_scale(3, 3).map_err(|e| e.to_string())?;
    ensure(scale == reference, || format!("scale order {scale:?}"))?;
    let excluded: BTreeSet<Vec<u32>> = estimate::enumerate_multisets(3, 3)
        .map_err(|e| e.to_string())?
        .into_iter()
        .filter(|e| !scale.contains(e))
        .map(|e| e.counts().to_vec())
        .collect();
    let expected: BTreeSet<Vec<u32>> = [vec![2, 0, 2], vec![1, 0, 2]].into_iter().collect();
    ensure(excluded == expected, || {
        format!("8 estimates match, but the excluded multisets are {excluded:?}, not the expected {expected:?}")
    })?;
    Ok("8 estimates in reference order; exclusions match".into())
}

fn poset_replication() -> Check {
    let scale = estimate::enumerate_scale(3, 3).map_err(|e| e.to_string())?;
    let mut checks = 0;
    for i in 0..scale.len() {
        for j in i + 1..scale.len() {
            // e4 = (0,3,0) and e5 = (1,1,1) sit side by side; the rest is a chain.
            let expected = if (i, j) == (3, 4) {
                Dominance::Incomparable
            } else {
                Dominance::Better
            };
            let got = estimate::dominates(&scale[i], &scale[j]).map_err(|e| e.to_string())?;
            ensure(got == expected, || {
                format!("e{} vs e{}: expected {expected:?}, got {got:?}", i + 1, j + 1)
            })?;
            checks += 1;
        }
    }
    ensure(checks == 28, || format!("{checks} pairs checked"))?;
    Ok(format!("{checks} pairwise checks"))
}

fn proximity_oracle() -> Check {
    let mut pairs = 0;
    for (l, eta) in [(3, 3), (4, 2)] {
        let scale = estimate::enumerate_scale(l, eta).map_err(|e| e.to_string())?;
        for a in &scale {
            for b in &scale {
                let p = estimate::proximity(a, b).map_err(|e| e.to_string())?;
                let bfs = oracle::step_distance(a, b).map_err(|e| e.to_string())?;
                let split = oracle::signed_split(a, b).map_err(|e| e.to_string())?;
                ensure(p.magnitude() == bfs, || {
                    format!("{a} -> {b}: |delta| {} vs BFS {bfs}", p.magnitude())
                })?;
                ensure((p.delta_minus, p.delta_plus) == split, || {
                    format!("{a} -> {b}: split {p:?} vs {split:?}")
                })?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn median_optimality() -> Check {
    let scale = estimate::enumerate_scale(3, 3).map_err(|e| e.to_string())?;
    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let size = rng.gen_range(1..=MEDIAN_SET_MAX);
        let set: Vec<MsEstimate> = (0..size).map(|_| common::random_estimate(&mut rng, 3, 3)).collect();
        let (_, cost) = estimate::generalized_median_with_cost(&set).map_err(|e| e.to_string())?;
        let mut best = u64::MAX;
        for c in &scale {
            let mut total = 0;
            for e in &set {
                total += oracle::step_distance(c, e).map_err(|e| e.to_string())?;
            }
            best = best.min(total);
        }
        ensure(cost == best, || {
            format!("seed {seed}: median cost {cost}, exhaustive {best}")
        })?;
    }
    Ok(format!("{SEEDS} random sets"))
}

fn coloring_counts() -> Check {
    let cg = graph_fixture("fig12_graph");
    let limits = ExactLimits::default();
    let count = coloring::count_proper_colorings(&cg.graph, 3, &limits).map_err(|e| e.to_string())?;
    let (chi, _) = coloring::chromatic_coloring(&cg.graph, None, &limits).map_err(|e| e.to_string())?;
    ensure(count == 6, || format!("count {count}"))?;
    ensure(chi == 3, || format!("chromatic number {chi}"))?;
    Ok("6 colorings with 3 colors; chi = 3".into())
}

fn compatibility_coloring() -> Check {
    let cg = graph_fixture("fig13_compat");
    let choice = |names: [&str; 4]| -> Vec<usize> {
        names
            .iter()
            .enumerate()
            .map(|(v, n)| cg.candidates[v].iter().position(|c| c.color == *n).expect("candidate"))
            .collect()
    };
    let first = coloring::quality_of(&cg, &choice(["P2", "Q3", "V3", "W5"])).map_err(|e| e.to_string())?;
    let second = coloring::quality_of(&cg, &choice(["P3", "Q5", "V2", "W4"])).map_err(|e| e.to_string())?;
    ensure(first.to_string() == "(4;1,3,0)", || format!("first N = {first}"))?;
    ensure(second.to_string() == "(2;3,1,0)", || format!("second N = {second}"))?;
    let configurations: usize = cg.candidates.iter().map(Vec::len).product();
    ensure(configurations == 625, || format!("{configurations} configurations"))?;
    let front = coloring::compat_coloring_pareto(&cg, &ExactLimits::default()).map_err(|e| e.to_string())?;
    let got: BTreeSet<(Vec<usize>, String)> = front
        .iter()
        .map(|s| (s.choice.clone(), s.quality.to_string()))
        .collect();
    let want: BTreeSet<(Vec<usize>, String)> = oracle::compat_front(&cg)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|(c, q)| (c, q.to_string()))
        .collect();
    ensure(got == want, || format!("front {got:?} vs brute force {want:?}"))?;
    Ok(format!(
        "both N vectors reproduced; front of {} equals brute force",
        front.len()
    ))
}

fn partition_coloring() -> Check {
    let cg = graph_fixture("fig15_partition");
    let v = |name: &str| cg.graph.index_of(name).expect("vertex");
    let reference = [v("2"), v("6"), v("9"), v("5")];
    let induced = cg.graph.induced(&reference);
    let q1 = [0, 1, 0, 1];
    let q2 = [1, 0, 1, 0];
    ensure(induced.is_proper(&q1) && induced.is_proper(&q2), || {
        "reference Q1/Q2 are not proper on their induced subgraph".into()
    })?;
    let result = coloring::partition_coloring(&cg, &ExactLimits::default()).map_err(|e| e.to_string())?;
    let reps: Vec<&str> = result
        .representatives
        .iter()
        .map(|&r| cg.graph.names()[r].as_str())
        .collect();
    ensure(result.colors == 2, || {
        format!(
            "reference Q1/Q2 are proper 2-colorings, but the solver returns {} color(s) with representatives {reps:?}",
            result.colors
        )
    })?;
    Ok("2 colors; reference Q1/Q2 verified".into())
}

fn production_pipeline() -> Check {
    let InstanceFile::Production(spec) = fixture("table13_production") else {
        return Err("table13 fixture has the wrong kind".into());
    };
    let items = spec.items().map_err(|e| e.to_string())?;
    let table = spec.table().map_err(|e| e.to_string())?;
    let limits = ExactLimits::default();
    let plan = pipelines::plan_paper(&items, &spec.settings(), &table, &limits).map_err(|e| e.to_string())?;
    for item in &spec.items {
        let reference = item
            .general_item
            .as_deref()
            .expect("the reference plan lists a general item");
        let got = plan.label_of(multibin::classic::ItemId(item.id));
        ensure(got == Some(reference), || {
            format!("item {}: {got:?} instead of {reference}", item.id)
        })?;
    }
    let labels: Vec<&str> = plan.general_items.iter().map(|g| g.label.as_str()).collect();
    ensure(labels == ["I", "II", "III", "IV", "V", "VI", "VII", "VIII"], || {
        format!("labels {labels:?}")
    })?;
    let width = |label: &str| plan.general_items.iter().find(|g| g.label == label).map(|g| g.width());
    for (label, w) in [("I", 19), ("VI", 19), ("VII", 18), ("VIII", 20)] {
        ensure(width(label) == Some(w), || {
            format!("{label} has width {:?}, expected {w}", width(label))
        })?;
    }
    let first = plan.general_items.iter().find(|g| g.label == "I").expect("I exists");
    ensure(
        first
            .lanes
            .iter()
            .any(|l| l.items.len() == 2 && l.items.contains(&3.into()) && l.items.contains(&4.into())),
        || "items 3 and 4 do not share a lane".into(),
    )?;
    // Machine 3 of the reference plan runs VI, VII, VIII.
    let machine3: Vec<String> = ["VI", "VII", "VIII"]
        .iter()
        .map(|l| {
            plan.general_items
                .iter()
                .find(|g| g.label == *l)
                .expect("label")
                .color
                .clone()
        })
        .collect();
    let reference_cost = pipelines::sequence_cost(&machine3, &table, None).map_err(|e| e.to_string())?;
    let (_, cost) = pipelines::order_colors(&machine3, &table, None, &limits).map_err(|e| e.to_string())?;
    let enumerated = oracle::order_colors_cost(&machine3, &table, None).map_err(|e| e.to_string())?;
    ensure(reference_cost == 3, || format!("reference order cost {reference_cost}"))?;
    ensure(cost == 2 && enumerated == 2, || {
        format!("order cost {cost}, enumeration {enumerated}")
    })?;
    Ok("I-VIII reproduced; machine 3 cost 2 < reference 3".into())
}

fn same_solution(
    model: &ModelKind,
    items: &[multibin::mse_packing::MseItem],
    objective: Objective,
    limits: &ExactLimits,
) -> Result<(), String> {
    let solved = mse_packing::solve(model, items, objective, limits);
    let best = oracle::mse_best(model, items, objective).map_err(|e| e.to_string())?;
    match (solved, best) {
        (Err(Error::Infeasible(_)), None) => Ok(()),
        (Ok(s), Some(b)) => {
            let value_ok = match objective {
                Objective::Profit => s.objective == mse_packing::ObjectiveValue::Scalar(b.scalar.expect("profit")),
                _ => s.objective.estimate() == b.estimate.as_ref(),
            };
            ensure(
                value_ok && s.cardinality == b.cardinality && s.selected() == b.ids,
                || {
                    format!(
                        "solver {:?}/{:?} vs oracle {:?}/{:?}",
                        s.objective,
                        s.selected(),
                        b.estimate,
                        b.ids
                    )
                },
            )
        }
        (s, b) => Err(format!("solver {s:?} vs oracle {b:?}")),
    }
}

fn same_front(
    model: &ModelKind,
    items: &[multibin::mse_packing::MseItem],
    objective: Objective,
    limits: &ExactLimits,
) -> Result<(), String> {
    let solved = mse_packing::pareto_front_biobjective(model, items, objective, limits);
    let want = oracle::mse_front(model, items, objective).map_err(|e| e.to_string())?;
    match solved {
        Err(Error::Infeasible(_)) if want.is_empty() => Ok(()),
        Ok(front) => {
            let got: BTreeSet<(Option<Vec<u32>>, usize)> = front
                .iter()
                .map(|s| (s.objective.estimate().map(|e| e.counts().to_vec()), s.cardinality))
                .collect();
            let want: BTreeSet<(Option<Vec<u32>>, usize)> = want
                .iter()
                .map(|(e, c)| (e.as_ref().map(|e| e.counts().to_vec()), *c))
                .collect();
            ensure(got == want && got.len() == front.len(), || {
                format!("front {got:?} vs {want:?}")
            })
        }
        Err(e) => Err(e.to_string()),
    }
}

fn solver_oracle_equivalence() -> Check {
    let started = Instant::now();
    let limits = ExactLimits::default();
    let mut runs = 0usize;
    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let ctx = |what: &str, e: String| format!("seed {seed}, {what}: {e}");

        let n = rng.gen_range(1..=MAX_N);
        let instance = common::pack_instance(&mut rng, n);
        let exact = classic::exact_min_bins(&instance, &limits).map_err(|e| ctx("exact", e.to_string()))?;
        let want = oracle::min_bins(&instance, None).map_err(|e| e.to_string())?;
        ensure(exact.bin_count() == want, || {
            ctx("exact_min_bins", format!("{} vs {want}", exact.bin_count()))
        })?;

        let graph = common::conflicts(&mut rng, n, 0.3);
        let packed = relational::conflict_pack(&instance, &graph, SolveMode::Exact, &limits)
            .map_err(|e| ctx("conflict", e.to_string()))?;
        let want = oracle::min_bins(&instance, Some(&graph)).map_err(|e| e.to_string())?;
        ensure(packed.bin_count() == want, || {
            ctx("conflict_pack", format!("{} vs {want}", packed.bin_count()))
        })?;

        let small_n = rng.gen_range(1..=8);
        let small = common::pack_instance(&mut rng, small_n)
            .with_max_bins(rng.gen_range(1..=MAX_K))
            .map_err(|e| e.to_string())?;
        let profits: Option<std::collections::BTreeMap<_, _>> = rng
            .gen_bool(0.5)
            .then(|| small.items().iter().map(|i| (i.id, q(rng.gen_range(1..=9)))).collect());
        let inv = relational::inverse_pack(&small, profits.as_ref(), SolveMode::Exact, &limits)
            .map_err(|e| ctx("inverse", e.to_string()))?;
        let want = oracle::inverse_pack_profit(&small, profits.as_ref()).map_err(|e| e.to_string())?;
        ensure(inv.profit == want, || {
            ctx("inverse_pack", format!("{} vs {want}", inv.profit))
        })?;
        runs += 3;

        for which in 0..6 {
            let multi = matches!(which, 2..=5);
            let n = if multi {
                rng.gen_range(1..=7)
            } else {
                rng.gen_range(1..=MAX_N)
            };
            let model = common::model(&mut rng, which, n, MAX_K);
            let bins = match &model {
                ModelKind::GeneralizedAssignment { capacities, .. } => capacities.len(),
                _ => 0,
            };
            let groups = if which == 1 { 3 } else { 0 };
            let eta = rng.gen_range(1..=2);
            let items = common::mse_items(&mut rng, n, eta, bins, groups);
            let objective = [Objective::Integrated, Objective::Median, Objective::Profit][(seed as usize + which) % 3];
            same_solution(&model, &items, objective, &limits)
                .map_err(|e| ctx(&format!("model {which} {objective:?}"), e))?;
            runs += 1;
            if objective != Objective::Profit {
                same_front(&model, &items, objective, &limits).map_err(|e| ctx(&format!("front {which}"), e))?;
                runs += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < ORACLE_SUITE_BUDGET, || format!("suite took {elapsed:?}"))?;
    Ok(format!("{runs} comparisons in {:.1}s", elapsed.as_secs_f64()))
}

fn heuristic_sanity() -> Check {
    let limits = ExactLimits::default();
    let policies = [
        FitPolicy::NextFit,
        FitPolicy::FirstFit,
        FitPolicy::BestFit,
        FitPolicy::WorstFit,
    ];
    let mut worst_gap = 0;
    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let n = rng.gen_range(1..=MAX_N);
        let instance = common::pack_instance(&mut rng, n);
        let lb = classic::lower_bound(&instance);
        let none = RelationSet::default();
        for policy in policies {
            for order in [ItemOrder::AsGiven, ItemOrder::Decreasing] {
                let s = classic::fit_pack(&instance, policy, order);
                let report = classic::validate(&instance, &s).map_err(|e| e.to_string())?;
                let violations = relational::check_constraints(&instance, &none, &s).map_err(|e| e.to_string())?;
                ensure(report.is_ok() && violations.is_empty(), || {
                    format!(
                        "seed {seed} {policy:?}/{order:?}: {:?} {violations:?}",
                        report.violations
                    )
                })?;
                ensure(s.bin_count() >= lb, || format!("seed {seed}: below the lower bound"))?;
            }
        }
        let graph = common::conflicts(&mut rng, n, 0.3);
        let mut relations = RelationSet::default();
        for &(a, b) in graph.edges() {
            relations.add_conflict(a, b);
        }
        let greedy =
            relational::conflict_pack(&instance, &graph, SolveMode::Greedy, &limits).map_err(|e| e.to_string())?;
        let report = classic::validate(&instance, &greedy).map_err(|e| e.to_string())?;
        let violations = relational::check_constraints(&instance, &relations, &greedy).map_err(|e| e.to_string())?;
        ensure(
            report.is_ok() && violations.is_empty() && greedy.bin_count() >= lb,
            || format!("seed {seed} conflict greedy: {:?} {violations:?}", report.violations),
        )?;
        let ffd = classic::fit_pack(&instance, FitPolicy::FirstFit, ItemOrder::Decreasing).bin_count();
        let exact = classic::exact_min_bins(&instance, &limits)
            .map_err(|e| e.to_string())?
            .bin_count();
        ensure(ffd <= exact + FFD_SLACK, || {
            format!("seed {seed}: FFD {ffd}, exact {exact}")
        })?;
        worst_gap = worst_gap.max(ffd - exact);
    }
    Ok(format!("all heuristics feasible; largest FFD excess {worst_gap}"))
}

fn message_scheduling() -> Check {
    let three: Vec<Message> = (1..=3).map(|i| Message::new(i, q(i as i64))).collect();
    let mean = pipelines::swf_order(&three)
        .mean_completion()
        .map_err(|e| e.to_string())?;
    ensure(mean == Rational::new(10, 3), || format!("mean completion {mean}"))?;

    for seed in 0..SEEDS {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        let n = rng.gen_range(1..=SWF_MAX_N);
        let msgs: Vec<Message> = (1..=n as u32)
            .map(|i| Message::new(i, q(rng.gen_range(1..=9))).with_age(rng.gen_range(0..4)))
            .collect();
        let swf = pipelines::swf_order(&msgs)
            .mean_completion()
            .map_err(|e| e.to_string())?;
        let weights: Vec<Rational> = msgs.iter().map(|m| m.weight).collect();
        let best = oracle::min_mean_completion(&weights).map_err(|e| e.to_string())?;
        ensure(swf == best, || format!("seed {seed}: SWF {swf}, best order {best}"))?;

        let layered = pipelines::pareto_layer_assign(&msgs, q(rng.gen_range(1..=20)));
        let mut seen = BTreeSet::new();
        for layer in &layered.layers {
            for a in &layer.members {
                ensure(seen.insert(*a), || format!("seed {seed}: {a} in two layers"))?;
                let ma = msgs.iter().find(|m| m.id == *a).expect("member");
                for b in &layer.members {
                    let mb = msgs.iter().find(|m| m.id == *b).expect("member");
                    let dominates = ma.weight <= mb.weight
                        && ma.wait_age >= mb.wait_age
                        && (ma.weight < mb.weight || ma.wait_age > mb.wait_age);
                    ensure(!dominates, || format!("seed {seed}: {a} dominates {b} within a layer"))?;
                }
            }
        }
        ensure(seen.len() == msgs.len(), || {
            format!("seed {seed}: layers miss messages")
        })?;

        let arrivals: Vec<Vec<Message>> = (0..SIM_PERIODS)
            .map(|p| {
                (0..rng.gen_range(0..4))
                    .map(|k| Message::new((p * 10 + k + 1) as u32, q(rng.gen_range(1..=6))))
                    .collect()
            })
            .collect();
        let policy = if seed % 2 == 0 {
            PeriodPolicy::Layers
        } else {
            PeriodPolicy::Select(SelectObjective::Count)
        };
        let records = pipelines::simulate_periods(&arrivals, SIM_PERIODS, q(6), policy, &ExactLimits::default())
            .map_err(|e| e.to_string())?;
        let mut ages: std::collections::BTreeMap<multibin::classic::ItemId, u32> = Default::default();
        for (p, record) in records.iter().enumerate() {
            let arrived: BTreeSet<_> = arrivals[p].iter().map(|m| m.id).collect();
            for m in &record.wait {
                let expected = if arrived.contains(&m.id) {
                    1
                } else {
                    ages.get(&m.id).map_or(u32::MAX, |a| a + 1)
                };
                ensure(m.wait_age == expected, || {
                    format!(
                        "seed {seed} period {}: message {} aged {} (expected {expected})",
                        p + 1,
                        m.id,
                        m.wait_age
                    )
                })?;
            }
            ages = record.wait.iter().map(|m| (m.id, m.wait_age)).collect();
        }
    }
    Ok(format!("SWF optimal on {SEEDS} sets; layers valid; ages +1 per period"))
}

fn round_trip_and_determinism() -> Check {
    for (name, text) in io::FIXTURES {
        let parsed = io::parse_instance(text).map_err(|e| format!("{name}: {e}"))?;
        let again = io::parse_instance(&io::emit_instance(&parsed)).map_err(|e| format!("{name}: {e}"))?;
        ensure(parsed == again, || format!("{name} changes on a round trip"))?;
    }
    let runs: [&[&str]; 5] = [
        &["scale", "--l", "3", "--eta", "3"],
        &["pipeline", "paper", "--fixture", "table13", "--oracle"],
        &["color", "compat", "--fixture", "fig13"],
        &["pack", "--fixture", "fig2", "--algo", "exact", "--oracle"],
        &["bench", "--seed", "7", "--count", "5", "--oracle"],
    ];
    for argv in runs {
        let mut args: Vec<&str> = argv.to_vec();
        args.extend(["--format", "machine"]);
        let a = run_command(&args);
        let b = run_command(&args);
        ensure(a.code == 0 && a == b, || {
            format!("{argv:?}: runs differ or fail ({})", a.stderr)
        })?;
        let report = io::parse_report(&a.stdout).map_err(|e| e.to_string())?;
        ensure(io::emit_report(&report, io::Format::Machine) == a.stdout, || {
            format!("{argv:?}: report does not re-emit identically")
        })?;
    }
    Ok(format!("{} fixtures round-trip; CLI output stable", io::FIXTURES.len()))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("scale enumeration", scale_enumeration),
        ("poset replication", poset_replication),
        ("proximity oracle", proximity_oracle),
        ("median optimality", median_optimality),
        ("coloring counts", coloring_counts),
        ("compatibility coloring", compatibility_coloring),
        ("partition coloring", partition_coloring),
        ("production pipeline", production_pipeline),
        ("solver/oracle equivalence", solver_oracle_equivalence),
        ("heuristic sanity", heuristic_sanity),
        ("message scheduling", message_scheduling),
        ("round-trip and determinism", round_trip_and_determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail})", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
