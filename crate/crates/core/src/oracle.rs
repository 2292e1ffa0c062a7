//! Brute-force counterparts of the exact solvers, for cross-checking on
//! small instances. Each one enumerates its whole search space without
//! pruning and shares no search code with the solver it checks.

use std::collections::BTreeMap;

use crate::classic::{ItemId, PackInstance};
use crate::coloring::{quality_of, ColoredGraph, Graph, QualityVector};
use crate::error::{Error, Result};
use crate::estimate::{self, canonical_cmp, Dominance, MsEstimate};
use crate::mse_packing::{ModelKind, MseItem, Objective, Relaxation};
use crate::pipelines::{ColorChangeTable, Message};
use crate::relational::ConflictGraph;
use crate::scalar::Scalar;

/// Largest instance any oracle accepts.
pub const ORACLE_MAX_ITEMS: usize = 12;

const STEP_GRAPH_MAX_NODES: usize = 100_000;

fn guard(what: &'static str, n: usize) -> Result<()> {
    if n > ORACLE_MAX_ITEMS {
        return Err(Error::SizeLimit {
            what,
            size: n,
            limit: ORACLE_MAX_ITEMS,
        });
    }
    Ok(())
}

/// Calls `f` with every vector in `0..radix` of length `n`, last position
/// fastest.
pub fn for_each_tuple(n: usize, radix: usize, mut f: impl FnMut(&[usize])) {
    if radix == 0 {
        if n == 0 {
            f(&[]);
        }
        return;
    }
    let mut t = vec![0usize; n];
    loop {
        f(&t);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < radix {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Calls `f` with every permutation of `0..n` in lexicographic order.
pub fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        f(&p);
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Minimum bin count over all set partitions of the items (restricted
/// growth strings), honouring capacity and optional conflicts.
pub fn min_bins<S: Scalar>(instance: &PackInstance<S>, conflicts: Option<&ConflictGraph>) -> Result<usize> {
    let items = instance.items();
    let n = items.len();
    guard("oracle bin packing", n)?;
    let mut best = n;
    let mut labels = vec![0usize; n];
    fn rec<S: Scalar>(
        items: &[crate::classic::PackItem<S>],
        cap: S,
        conflicts: Option<&ConflictGraph>,
        i: usize,
        blocks: usize,
        labels: &mut Vec<usize>,
        best: &mut usize,
    ) {
        if i == items.len() {
            let ok = (0..blocks).all(|b| {
                let members: Vec<usize> = (0..items.len()).filter(|&x| labels[x] == b).collect();
                let load = members.iter().fold(S::zero(), |acc, &x| acc + items[x].weight);
                let clean = conflicts.is_none_or(|g| {
                    members
                        .iter()
                        .all(|&x| members.iter().all(|&y| x == y || !g.contains(items[x].id, items[y].id)))
                });
                load <= cap && clean
            });
            if ok && blocks < *best {
                *best = blocks;
            }
            return;
        }
        for b in 0..=blocks {
            labels[i] = b;
            rec(items, cap, conflicts, i + 1, blocks.max(b + 1), labels, best);
        }
    }
    if n == 0 {
        return Ok(0);
    }
    rec(items, instance.capacity(), conflicts, 0, 0, &mut labels, &mut best);
    Ok(best)
}

/// Maximum total profit (unit profits when `None`) over all assignments
/// of items to `max_bins` bins or to nothing.
pub fn inverse_pack_profit<S: Scalar>(instance: &PackInstance<S>, profits: Option<&BTreeMap<ItemId, S>>) -> Result<S> {
    let items = instance.items();
    guard("oracle inverse packing", items.len())?;
    let k = instance
        .max_bins()
        .ok_or_else(|| Error::InvalidInstance("inverse packing needs max_bins".into()))?;
    let mut best = S::zero();
    for_each_tuple(items.len(), k + 1, |t| {
        let mut loads = vec![S::zero(); k];
        let mut value = S::zero();
        for (item, &slot) in items.iter().zip(t) {
            if slot > 0 {
                loads[slot - 1] = loads[slot - 1] + item.weight;
                value = value + profits.map_or(S::one(), |p| p[&item.id]);
            }
        }
        if loads.iter().all(|&l| l <= instance.capacity()) && value > best {
            best = value;
        }
    });
    Ok(best)
}

/// A feasible solution as seen by the packing-model oracles.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleSolution<S> {
    pub ids: Vec<ItemId>,
    pub bins: Vec<Option<usize>>,
    pub cardinality: usize,
    /// Integrated or median estimate; `None` for an empty median.
    pub estimate: Option<MsEstimate>,
    pub scalar: Option<S>,
}

fn model_bins<S: Scalar>(model: &ModelKind<S>) -> (Vec<S>, bool) {
    match model {
        ModelKind::Knapsack { capacity } | ModelKind::MultipleChoice { capacity } => (vec![*capacity], false),
        ModelKind::MultipleKnapsack { capacities } => (capacities.clone(), false),
        ModelKind::GeneralizedAssignment { capacities, .. } => (capacities.clone(), true),
        ModelKind::InverseBpp { bins, capacity } | ModelKind::ConflictInverse { bins, capacity, .. } => {
            (vec![*capacity; *bins], false)
        }
    }
}

/// Every feasible solution of a packing model, from the full
/// `(k + 1)^n` assignment space.
pub fn mse_feasible<S: Scalar>(
    model: &ModelKind<S>,
    items: &[MseItem<S>],
    objective: Objective,
) -> Result<Vec<OracleSolution<S>>> {
    guard("oracle packing model", items.len())?;
    let (caps, positional) = model_bins(model);
    let k = caps.len();
    let mut out = Vec::new();
    let mut failure = None;
    for_each_tuple(items.len(), k + 1, |t| {
        if failure.is_some() {
            return;
        }
        let bins: Vec<Option<usize>> = t.iter().map(|&s| s.checked_sub(1)).collect();
        match evaluate(model, items, objective, &caps, positional, &bins) {
            Ok(Some(sol)) => out.push(sol),
            Ok(None) => {}
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn evaluate<S: Scalar>(
    model: &ModelKind<S>,
    items: &[MseItem<S>],
    objective: Objective,
    caps: &[S],
    positional: bool,
    bins: &[Option<usize>],
) -> Result<Option<OracleSolution<S>>> {
    for (j, &cap) in caps.iter().enumerate() {
        let load = items
            .iter()
            .zip(bins)
            .filter(|(_, b)| **b == Some(j))
            .fold(S::zero(), |acc, (i, _)| acc + i.weight);
        if load > cap {
            return Ok(None);
        }
    }
    match model {
        ModelKind::MultipleChoice { .. } => {
            let mut per_group: BTreeMap<u32, usize> = BTreeMap::new();
            for item in items {
                per_group.entry(item.group.unwrap_or(u32::MAX)).or_default();
            }
            for (item, b) in items.iter().zip(bins) {
                if b.is_some() {
                    *per_group.entry(item.group.unwrap_or(u32::MAX)).or_default() += 1;
                }
            }
            if per_group.values().any(|&c| c != 1) {
                return Ok(None);
            }
        }
        ModelKind::GeneralizedAssignment { relaxation, .. } => {
            if *relaxation == Relaxation::MustAssignAll && bins.iter().any(Option::is_none) {
                return Ok(None);
            }
        }
        ModelKind::ConflictInverse { conflicts, .. } => {
            for (a, ba) in items.iter().zip(bins) {
                for (b, bb) in items.iter().zip(bins) {
                    if a.id < b.id && ba.is_some() && ba == bb && conflicts.contains(a.id, b.id) {
                        return Ok(None);
                    }
                }
            }
        }
        _ => {}
    }
    let mut ests = Vec::new();
    let mut scalar = S::zero();
    for (item, b) in items.iter().zip(bins) {
        let Some(j) = *b else { continue };
        match objective {
            Objective::Profit => {
                let p = if positional && !item.position_profits.is_empty() {
                    match item.position_profits.get(&j) {
                        Some(p) => *p,
                        None => return Ok(None),
                    }
                } else {
                    item.profit
                        .ok_or_else(|| Error::InvalidInstance(format!("item {} has no profit", item.id)))?
                };
                scalar = scalar + p;
            }
            _ => {
                let e = if positional && !item.position_estimates.is_empty() {
                    match item.position_estimates.get(&j) {
                        Some(e) => e.clone(),
                        None => return Ok(None),
                    }
                } else {
                    item.estimate
                        .clone()
                        .ok_or_else(|| Error::InvalidInstance(format!("item {} has no estimate", item.id)))?
                };
                ests.push(e);
            }
        }
    }
    let l = items
        .iter()
        .find_map(|i| i.estimate.as_ref().or(i.position_estimates.values().next()))
        .map_or(1, MsEstimate::l);
    let estimate = match objective {
        Objective::Profit => None,
        Objective::Integrated if ests.is_empty() => Some(MsEstimate::empty(l)?),
        Objective::Integrated => Some(estimate::integrate(&ests)?),
        Objective::Median if ests.is_empty() => None,
        Objective::Median => Some(estimate::generalized_median(&ests)?),
    };
    let mut ids: Vec<ItemId> = items
        .iter()
        .zip(bins)
        .filter(|(_, b)| b.is_some())
        .map(|(i, _)| i.id)
        .collect();
    ids.sort_unstable();
    Ok(Some(OracleSolution {
        cardinality: ids.len(),
        ids,
        bins: bins.to_vec(),
        estimate,
        scalar: (objective == Objective::Profit).then_some(scalar),
    }))
}

fn est_dominance(a: &Option<MsEstimate>, b: &Option<MsEstimate>) -> Dominance {
    match (a, b) {
        (None, None) => Dominance::Equal,
        (Some(_), None) => Dominance::Better,
        (None, Some(_)) => Dominance::Worse,
        (Some(x), Some(y)) => {
            // per-level cumulative counts, compared directly
            let cum = |e: &MsEstimate| {
                e.counts()
                    .iter()
                    .scan(0u64, |acc, &c| {
                        *acc += u64::from(c);
                        Some(*acc)
                    })
                    .collect::<Vec<_>>()
            };
            let (cx, cy) = (cum(x), cum(y));
            let ge = cx.iter().zip(&cy).all(|(p, q)| p >= q);
            let le = cx.iter().zip(&cy).all(|(p, q)| p <= q);
            match (ge, le) {
                (true, true) => Dominance::Equal,
                (true, false) => Dominance::Better,
                (false, true) => Dominance::Worse,
                (false, false) => Dominance::Incomparable,
            }
        }
    }
}

fn canonical_opt(a: &Option<MsEstimate>, b: &Option<MsEstimate>) -> std::cmp::Ordering {
    match (a, b) {
        (Some(x), Some(y)) => canonical_cmp(x, y),
        (Some(_), None) => std::cmp::Ordering::Less,
        (None, Some(_)) => std::cmp::Ordering::Greater,
        (None, None) => std::cmp::Ordering::Equal,
    }
}

/// The solution a single-objective solver must return, by the documented
/// selection rule applied to the full feasible set.
pub fn mse_best<S: Scalar>(
    model: &ModelKind<S>,
    items: &[MseItem<S>],
    objective: Objective,
) -> Result<Option<OracleSolution<S>>> {
    let all = mse_feasible(model, items, objective)?;
    let pool: Vec<&OracleSolution<S>> = if objective == Objective::Profit {
        let top = all
            .iter()
            .filter_map(|s| s.scalar)
            .fold(None, |m: Option<S>, v| match m {
                Some(m) if m >= v => Some(m),
                _ => Some(v),
            });
        all.iter().filter(|s| s.scalar == top).collect()
    } else {
        all.iter()
            .filter(|s| {
                !all.iter()
                    .any(|o| est_dominance(&o.estimate, &s.estimate) == Dominance::Better)
            })
            .collect()
    };
    Ok(pool
        .into_iter()
        .min_by(|a, b| {
            b.cardinality
                .cmp(&a.cardinality)
                .then_with(|| canonical_opt(&a.estimate, &b.estimate))
                .then_with(|| a.ids.cmp(&b.ids))
                .then_with(|| a.bins.cmp(&b.bins))
        })
        .cloned())
}

/// Distinct (estimate, cardinality) pairs not dominated in both
/// coordinates by another feasible solution.
pub fn mse_front<S: Scalar>(
    model: &ModelKind<S>,
    items: &[MseItem<S>],
    objective: Objective,
) -> Result<Vec<(Option<MsEstimate>, usize)>> {
    let all = mse_feasible(model, items, objective)?;
    let mut out: Vec<(Option<MsEstimate>, usize)> = Vec::new();
    for s in &all {
        let beaten = all.iter().any(|o| {
            let d = est_dominance(&o.estimate, &s.estimate);
            let ge = matches!(d, Dominance::Better | Dominance::Equal) && o.cardinality >= s.cardinality;
            ge && (d == Dominance::Better || o.cardinality > s.cardinality)
        });
        let pair = (s.estimate.clone(), s.cardinality);
        if !beaten && !out.contains(&pair) {
            out.push(pair);
        }
    }
    Ok(out)
}

/// Shortest path between two estimates in the graph whose nodes are all
/// multisets of the same `(l, eta)` and whose edges move one element by one
/// level.
pub fn step_distance(from: &MsEstimate, to: &MsEstimate) -> Result<u64> {
    if from.l() != to.l() || from.eta() != to.eta() {
        return Err(Error::DimensionMismatch("estimates on different scales".into()));
    }
    let nodes = estimate::enumerate_multisets(from.l(), from.eta())?;
    if nodes.len() > STEP_GRAPH_MAX_NODES {
        return Err(Error::SizeLimit {
            what: "oracle step graph",
            size: nodes.len(),
            limit: STEP_GRAPH_MAX_NODES,
        });
    }
    let index: BTreeMap<Vec<u32>, usize> = nodes
        .iter()
        .enumerate()
        .map(|(i, e)| (e.counts().to_vec(), i))
        .collect();
    let mut dist = vec![u64::MAX; nodes.len()];
    let start = index[from.counts()];
    dist[start] = 0;
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        if nodes[u] == *to {
            return Ok(dist[u]);
        }
        let counts = nodes[u].counts();
        for i in 0..counts.len() {
            if counts[i] == 0 {
                continue;
            }
            for j in [i.wrapping_sub(1), i + 1] {
                if j >= counts.len() {
                    continue;
                }
                let mut next = counts.to_vec();
                next[i] -= 1;
                next[j] += 1;
                let v = index[&next];
                if dist[v] == u64::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    unreachable!("the step graph is connected")
}

/// `(δ⁻, δ⁺)` from the signed differences of the ascending element
/// sequences: improvements are elements that must move to a better level.
pub fn signed_split(from: &MsEstimate, to: &MsEstimate) -> Result<(u64, u64)> {
    if from.l() != to.l() || from.eta() != to.eta() {
        return Err(Error::DimensionMismatch("estimates on different scales".into()));
    }
    let (a, b) = (from.elements(), to.elements());
    let mut minus = 0u64;
    let mut plus = 0u64;
    for (x, y) in a.iter().zip(&b) {
        let d = *y as i64 - *x as i64;
        if d < 0 {
            minus += d.unsigned_abs();
        } else {
            plus += d as u64;
        }
    }
    Ok((minus, plus))
}

pub fn chromatic_number(graph: &Graph) -> Result<usize> {
    guard("oracle coloring", graph.len())?;
    for k in 0..=graph.len() {
        if count_colorings(graph, k)? > 0 {
            return Ok(k);
        }
    }
    unreachable!("n colors always suffice")
}

pub fn count_colorings(graph: &Graph, k: usize) -> Result<u128> {
    guard("oracle coloring", graph.len())?;
    let mut count = 0u128;
    for_each_tuple(graph.len(), k, |t| {
        if graph.is_proper(t) {
            count += 1;
        }
    });
    Ok(count)
}

/// Minimal used-color weight totals over every proper coloring from the
/// palette, as a set of distinct vectors.
pub fn min_weight_front<S: Scalar>(graph: &Graph, weights: &[Vec<S>]) -> Result<Vec<Vec<S>>> {
    guard("oracle coloring", graph.len())?;
    let mut totals: Vec<Vec<S>> = Vec::new();
    for_each_tuple(graph.len(), weights.len(), |t| {
        if !graph.is_proper(t) {
            return;
        }
        let mut used: Vec<usize> = t.to_vec();
        used.sort_unstable();
        used.dedup();
        let dim = weights.first().map_or(0, Vec::len);
        let total: Vec<S> = (0..dim)
            .map(|d| used.iter().fold(S::zero(), |acc, &c| acc + weights[c][d]))
            .collect();
        if !totals.contains(&total) {
            totals.push(total);
        }
    });
    let le = |a: &[S], b: &[S]| a.iter().zip(b).all(|(x, y)| x <= y);
    Ok(totals
        .iter()
        .filter(|t| !totals.iter().any(|o| o != *t && le(o, t)))
        .cloned()
        .collect())
}

/// Non-dominated configurations with `w ≥ 1` over the full product of
/// candidate lists.
pub fn compat_front<S: Scalar>(cg: &ColoredGraph<S>) -> Result<Vec<(Vec<usize>, QualityVector)>> {
    let radices: Vec<usize> = cg.candidates.iter().map(Vec::len).collect();
    let mut all = Vec::new();
    let mut choice = vec![0usize; radices.len()];
    loop {
        let q = quality_of(cg, &choice)?;
        if q.w >= 1 {
            all.push((choice.clone(), q));
        }
        let mut i = radices.len();
        loop {
            if i == 0 {
                return Ok(all
                    .iter()
                    .filter(|(_, q)| !all.iter().any(|(_, o)| o.compare(q) == Dominance::Better))
                    .cloned()
                    .collect());
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < radices[i] {
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Smallest chromatic number of an induced subgraph picking one vertex per
/// part.
pub fn partition_colors<S: Scalar>(cg: &ColoredGraph<S>) -> Result<usize> {
    let parts = cg.validate_parts()?;
    let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
    let mut best = usize::MAX;
    let mut pick = vec![0usize; parts.len()];
    loop {
        let reps: Vec<usize> = pick.iter().zip(parts).map(|(&i, p)| p[i]).collect();
        best = best.min(chromatic_number(&cg.graph.induced(&reps))?);
        let mut i = parts.len();
        loop {
            if i == 0 {
                return Ok(best);
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < sizes[i] {
                break;
            }
            pick[i] = 0;
        }
    }
}

/// Cheapest color-change cost over all orders.
pub fn order_colors_cost(colors: &[String], table: &ColorChangeTable, start: Option<&str>) -> Result<u32> {
    guard("oracle sequencing", colors.len())?;
    let mut best = u32::MAX;
    let mut failure = None;
    for_each_permutation(colors.len(), |p| {
        let seq: Vec<String> = p.iter().map(|&i| colors[i].clone()).collect();
        match crate::pipelines::sequence_cost(&seq, table, start) {
            Ok(c) => best = best.min(c),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(if colors.is_empty() { 0 } else { best }),
    }
}

/// Smallest mean completion time over all processing orders.
pub fn min_mean_completion<S: Scalar>(weights: &[S]) -> Result<S> {
    guard("oracle scheduling", weights.len())?;
    let mut best: Option<S> = None;
    let mut failure = None;
    for_each_permutation(weights.len(), |p| {
        let ordered: Vec<S> = p.iter().map(|&i| weights[i]).collect();
        match crate::pipelines::mean_completion(&ordered) {
            Ok(t) => {
                if best.is_none_or(|b| t < b) {
                    best = Some(t);
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => best.ok_or(Error::EmptyInput("no messages")),
    }
}

/// Largest number of messages fitting the budget, by subset enumeration.
pub fn max_message_count<S: Scalar>(messages: &[Message<S>], budget: S) -> Result<usize> {
    guard("oracle selection", messages.len())?;
    let mut best = 0;
    for_each_tuple(messages.len(), 2, |t| {
        let load = messages
            .iter()
            .zip(t)
            .filter(|(_, &x)| x == 1)
            .fold(S::zero(), |acc, (m, _)| acc + m.weight);
        if load <= budget {
            best = best.max(t.iter().sum());
        }
    });
    Ok(best)
}
