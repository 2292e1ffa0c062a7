//! Knapsack, multiple-choice, multiple knapsack, generalized assignment and
//! inverse bin packing models whose objective is a scalar profit or a
//! multiset estimate (integrated or median), plus bi-objective fronts.
//!
//! Estimate objectives are partially ordered. A single-objective solver
//! returns one non-dominated solution; ties among non-dominated solutions go
//! to larger cardinality, then canonical estimate order, then the
//! lexicographically smallest sorted id set, then the smallest bin vector.
//! Bins are 0-based indices into the capacity list.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::classic::ItemId;
use crate::error::{Error, Result};
use crate::estimate::{self, canonical_cmp, Dominance, MsEstimate};
use crate::limits::ExactLimits;
use crate::relational::ConflictGraph;
use crate::scalar::Scalar;
use crate::Rational;

/// Largest item count the subset tables are built for.
const MASK_ITEMS_MAX: usize = 24;

#[derive(Clone, Debug, PartialEq)]
pub struct MseItem<S = Rational> {
    pub id: ItemId,
    pub weight: S,
    pub profit: Option<S>,
    pub estimate: Option<MsEstimate>,
    /// Group for the multiple-choice model.
    pub group: Option<u32>,
    /// Bin-dependent estimates for generalized assignment. When non-empty,
    /// bins without an entry are forbidden for the item.
    pub position_estimates: BTreeMap<usize, MsEstimate>,
    /// Bin-dependent profits; same convention as `position_estimates`.
    pub position_profits: BTreeMap<usize, S>,
    /// Number of periods the item has waited.
    pub wait_age: Option<u32>,
}

impl<S: Scalar> MseItem<S> {
    pub fn new(id: impl Into<ItemId>, weight: S) -> Self {
        MseItem {
            id: id.into(),
            weight,
            profit: None,
            estimate: None,
            group: None,
            position_estimates: BTreeMap::new(),
            position_profits: BTreeMap::new(),
            wait_age: None,
        }
    }

    pub fn with_estimate(mut self, e: MsEstimate) -> Self {
        self.estimate = Some(e);
        self
    }

    pub fn with_profit(mut self, p: S) -> Self {
        self.profit = Some(p);
        self
    }

    pub fn with_group(mut self, g: u32) -> Self {
        self.group = Some(g);
        self
    }

    pub fn with_position_estimate(mut self, bin: usize, e: MsEstimate) -> Self {
        self.position_estimates.insert(bin, e);
        self
    }

    pub fn with_position_profit(mut self, bin: usize, p: S) -> Self {
        self.position_profits.insert(bin, p);
        self
    }

    pub fn with_wait_age(mut self, age: u32) -> Self {
        self.wait_age = Some(age);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Objective {
    /// Sum of scalar profits.
    Profit,
    /// Integration of member estimates; compared by accumulated dominance.
    Integrated,
    /// Generalized median of member estimates; the empty solution has no
    /// median and is dominated by every other.
    Median,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relaxation {
    MustAssignAll,
    AllowPartial,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ObjectiveValue<S = Rational> {
    Scalar(S),
    Integrated(MsEstimate),
    Median(Option<MsEstimate>),
}

impl<S: Scalar> ObjectiveValue<S> {
    pub fn estimate(&self) -> Option<&MsEstimate> {
        match self {
            ObjectiveValue::Scalar(_) => None,
            ObjectiveValue::Integrated(e) => Some(e),
            ObjectiveValue::Median(e) => e.as_ref(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MseSolution<S = Rational> {
    /// Packed items and their bin; single-container models use bin 0.
    pub assignment: BTreeMap<ItemId, usize>,
    pub objective: ObjectiveValue<S>,
    pub cardinality: usize,
}

impl<S> MseSolution<S> {
    pub fn selected(&self) -> Vec<ItemId> {
        self.assignment.keys().copied().collect()
    }
}

/// A model of the family together with its container parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind<S = Rational> {
    Knapsack {
        capacity: S,
    },
    MultipleChoice {
        capacity: S,
    },
    MultipleKnapsack {
        capacities: Vec<S>,
    },
    GeneralizedAssignment {
        capacities: Vec<S>,
        relaxation: Relaxation,
    },
    InverseBpp {
        bins: usize,
        capacity: S,
    },
    ConflictInverse {
        bins: usize,
        capacity: S,
        conflicts: ConflictGraph,
    },
}

pub fn knapsack_mse<S: Scalar>(
    items: &[MseItem<S>],
    capacity: S,
    objective: Objective,
    limits: &ExactLimits,
) -> Result<MseSolution<S>> {
    solve(&ModelKind::Knapsack { capacity }, items, objective, limits)
}

pub fn multiple_choice_mse<S: Scalar>(
    items: &[MseItem<S>],
    capacity: S,
    objective: Objective,
    limits: &ExactLimits,
) -> Result<MseSolution<S>> {
    solve(&ModelKind::MultipleChoice { capacity }, items, objective, limits)
}

pub fn multiple_knapsack_mse<S: Scalar>(
    items: &[MseItem<S>],
    capacities: &[S],
    objective: Objective,
    limits: &ExactLimits,
) -> Result<MseSolution<S>> {
    let capacities = capacities.to_vec();
    solve(&ModelKind::MultipleKnapsack { capacities }, items, objective, limits)
}

pub fn generalized_assignment_mse<S: Scalar>(
    items: &[MseItem<S>],
    capacities: &[S],
    objective: Objective,
    relaxation: Relaxation,
    limits: &ExactLimits,
) -> Result<MseSolution<S>> {
    let capacities = capacities.to_vec();
    solve(
        &ModelKind::GeneralizedAssignment { capacities, relaxation },
        items,
        objective,
        limits,
    )
}

pub fn inverse_bpp_mse<S: Scalar>(
    items: &[MseItem<S>],
    bins: usize,
    capacity: S,
    objective: Objective,
    limits: &ExactLimits,
) -> Result<MseSolution<S>> {
    solve(&ModelKind::InverseBpp { bins, capacity }, items, objective, limits)
}

pub fn conflict_inverse_mse<S: Scalar>(
    items: &[MseItem<S>],
    bins: usize,
    capacity: S,
    conflicts: &ConflictGraph,
    objective: Objective,
    limits: &ExactLimits,
) -> Result<MseSolution<S>> {
    let model = ModelKind::ConflictInverse {
        bins,
        capacity,
        conflicts: conflicts.clone(),
    };
    solve(&model, items, objective, limits)
}

/// Solves any model of the family for a single objective.
pub fn solve<S: Scalar>(
    model: &ModelKind<S>,
    items: &[MseItem<S>],
    objective: Objective,
    limits: &ExactLimits,
) -> Result<MseSolution<S>> {
    let eval = Evaluator::new(model, items, objective)?;
    let mut pool = Pool::new(objective == Objective::Profit);
    enumerate(model, items, &eval, limits, |asg| pool.offer(&eval, items, asg))?;
    let best = match pool {
        Pool::Scalar(best) => best,
        Pool::Estimates(map) => select_non_dominated(map.into_values().collect()),
    };
    let best = best.ok_or_else(|| infeasible(model))?;
    Ok(best.into_solution(items, &eval))
}

/// Every solution not dominated in (estimate, cardinality), one
/// representative per distinct pair, ordered by cardinality descending and
/// then canonical estimate order.
pub fn pareto_front_biobjective<S: Scalar>(
    model: &ModelKind<S>,
    items: &[MseItem<S>],
    objective: Objective,
    limits: &ExactLimits,
) -> Result<Vec<MseSolution<S>>> {
    if objective == Objective::Profit {
        return Err(Error::InvalidInstance(
            "the bi-objective front needs an estimate objective".into(),
        ));
    }
    let eval = Evaluator::new(model, items, objective)?;
    let mut pool = Pool::new(false);
    enumerate(model, items, &eval, limits, |asg| pool.offer(&eval, items, asg))?;
    let Pool::Estimates(map) = pool else { unreachable!() };
    let entries: Vec<Candidate<S>> = map.into_values().collect();
    let mut front: Vec<Candidate<S>> = entries
        .iter()
        .filter(|c| {
            !entries.iter().any(|o| {
                let d = compare_values(&o.estimate, &c.estimate);
                let ge = matches!(d, Dominance::Better | Dominance::Equal);
                ge && o.cardinality >= c.cardinality && (d == Dominance::Better || o.cardinality > c.cardinality)
            })
        })
        .cloned()
        .collect();
    if front.is_empty() {
        return Err(infeasible(model));
    }
    front.sort_by(tie_break);
    Ok(front.into_iter().map(|c| c.into_solution(items, &eval)).collect())
}

fn infeasible<S>(model: &ModelKind<S>) -> Error {
    let what = match model {
        ModelKind::GeneralizedAssignment { .. } => "no complete assignment fits the capacities",
        ModelKind::MultipleChoice { .. } => "no selection of one item per group fits the capacity",
        _ => "no feasible solution",
    };
    Error::Infeasible(what.into())
}

/// Dominance of `a` over `b`; an absent median is below everything.
pub(crate) fn compare_values(a: &Option<MsEstimate>, b: &Option<MsEstimate>) -> Dominance {
    match (a, b) {
        (None, None) => Dominance::Equal,
        (Some(_), None) => Dominance::Better,
        (None, Some(_)) => Dominance::Worse,
        (Some(x), Some(y)) => estimate::dominates_accumulated(x, y).unwrap_or(Dominance::Incomparable),
    }
}

fn cmp_optional_canonical(a: &Option<MsEstimate>, b: &Option<MsEstimate>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => canonical_cmp(x, y),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

#[derive(Clone, Debug)]
struct Candidate<S> {
    estimate: Option<MsEstimate>,
    scalar: Option<S>,
    cardinality: usize,
    ids: Vec<ItemId>,
    bins: Vec<Option<usize>>,
}

impl<S: Scalar> Candidate<S> {
    fn into_solution(self, items: &[MseItem<S>], eval: &Evaluator<S>) -> MseSolution<S> {
        let assignment = items
            .iter()
            .zip(&self.bins)
            .filter_map(|(item, b)| b.map(|b| (item.id, b)))
            .collect();
        let objective = match eval {
            Evaluator::Profit { .. } => ObjectiveValue::Scalar(self.scalar.expect("scalar candidate")),
            Evaluator::Integrated { .. } => {
                ObjectiveValue::Integrated(self.estimate.expect("integration is always defined"))
            }
            Evaluator::Median { .. } => ObjectiveValue::Median(self.estimate),
        };
        MseSolution {
            assignment,
            objective,
            cardinality: self.cardinality,
        }
    }
}

/// Order among candidates that the objective does not separate.
fn representative_cmp<S>(a: &Candidate<S>, b: &Candidate<S>) -> Ordering {
    a.ids.cmp(&b.ids).then_with(|| a.bins.cmp(&b.bins))
}

fn tie_break<S>(a: &Candidate<S>, b: &Candidate<S>) -> Ordering {
    b.cardinality
        .cmp(&a.cardinality)
        .then_with(|| cmp_optional_canonical(&a.estimate, &b.estimate))
        .then_with(|| representative_cmp(a, b))
}

fn select_non_dominated<S: Scalar>(mut entries: Vec<Candidate<S>>) -> Option<Candidate<S>> {
    entries.sort_by(tie_break);
    let pick = entries.iter().position(|c| {
        !entries
            .iter()
            .any(|o| compare_values(&o.estimate, &c.estimate) == Dominance::Better)
    })?;
    Some(entries.swap_remove(pick))
}

enum Pool<S> {
    Scalar(Option<Candidate<S>>),
    /// One representative per (estimate counts, cardinality).
    Estimates(BTreeMap<(Option<Vec<u32>>, usize), Candidate<S>>),
}

impl<S: Scalar> Pool<S> {
    fn new(scalar: bool) -> Self {
        if scalar {
            Pool::Scalar(None)
        } else {
            Pool::Estimates(BTreeMap::new())
        }
    }

    fn offer(&mut self, eval: &Evaluator<S>, items: &[MseItem<S>], bins: &[Option<usize>]) {
        let cardinality = bins.iter().filter(|b| b.is_some()).count();
        let make = |estimate, scalar| {
            let mut ids: Vec<ItemId> = items
                .iter()
                .zip(bins)
                .filter(|(_, b)| b.is_some())
                .map(|(i, _)| i.id)
                .collect();
            ids.sort_unstable();
            Candidate {
                estimate,
                scalar,
                cardinality,
                ids,
                bins: bins.to_vec(),
            }
        };
        match self {
            Pool::Scalar(best) => {
                let value = eval.scalar(bins);
                let cand = make(None, Some(value));
                let better = match best {
                    None => true,
                    Some(b) => {
                        let bv = b.scalar.expect("scalar candidate");
                        value
                            .total_cmp(&bv)
                            .then(cardinality.cmp(&b.cardinality))
                            .then_with(|| representative_cmp(b, &cand))
                            == Ordering::Greater
                    }
                };
                if better {
                    *best = Some(cand);
                }
            }
            Pool::Estimates(map) => {
                let estimate = eval.estimate(bins);
                let key = (estimate.as_ref().map(|e| e.counts().to_vec()), cardinality);
                let cand = make(estimate, None);
                match map.get(&key) {
                    Some(existing) if representative_cmp(existing, &cand) != Ordering::Greater => {}
                    _ => {
                        map.insert(key, cand);
                    }
                }
            }
        }
    }
}

/// Per-(item, bin) objective data; `None` marks a forbidden pairing.
enum Evaluator<S> {
    Profit {
        profit: Vec<Vec<Option<S>>>,
    },
    Integrated {
        slot: Vec<Vec<Option<usize>>>,
        table: Vec<MsEstimate>,
        l: usize,
    },
    Median {
        slot: Vec<Vec<Option<usize>>>,
        scale: Vec<MsEstimate>,
        /// `dist[s][t]`: `|δ(scale[s], table[t])|`.
        dist: Vec<Vec<u64>>,
    },
}

fn bin_count<S>(model: &ModelKind<S>) -> usize {
    match model {
        ModelKind::Knapsack { .. } | ModelKind::MultipleChoice { .. } => 1,
        ModelKind::MultipleKnapsack { capacities } | ModelKind::GeneralizedAssignment { capacities, .. } => {
            capacities.len()
        }
        ModelKind::InverseBpp { bins, .. } | ModelKind::ConflictInverse { bins, .. } => *bins,
    }
}

impl<S: Scalar> Evaluator<S> {
    fn new(model: &ModelKind<S>, items: &[MseItem<S>], objective: Objective) -> Result<Self> {
        let k = bin_count(model);
        let positional = matches!(model, ModelKind::GeneralizedAssignment { .. });
        if objective == Objective::Profit {
            let profit = items
                .iter()
                .map(|item| {
                    (0..k)
                        .map(|j| {
                            if positional && !item.position_profits.is_empty() {
                                return Ok(item.position_profits.get(&j).copied());
                            }
                            item.profit
                                .map(Some)
                                .ok_or_else(|| Error::InvalidInstance(format!("item {} has no profit", item.id)))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Evaluator::Profit { profit });
        }

        let mut table: Vec<MsEstimate> = Vec::new();
        let mut index = |e: &MsEstimate| match table.iter().position(|t| t == e) {
            Some(p) => p,
            None => {
                table.push(e.clone());
                table.len() - 1
            }
        };
        let mut slot = Vec::with_capacity(items.len());
        for item in items {
            let row = (0..k)
                .map(|j| {
                    if positional && !item.position_estimates.is_empty() {
                        return Ok(item.position_estimates.get(&j).map(&mut index));
                    }
                    item.estimate
                        .as_ref()
                        .map(|e| Some(index(e)))
                        .ok_or_else(|| Error::InvalidInstance(format!("item {} has no estimate", item.id)))
                })
                .collect::<Result<Vec<_>>>()?;
            slot.push(row);
        }
        if let Some(first) = table.first() {
            if let Some(odd) = table.iter().find(|e| e.l() != first.l() || e.eta() != first.eta()) {
                return Err(Error::DimensionMismatch(format!(
                    "estimates {first} and {odd} are on different scales"
                )));
            }
        }
        let (l, eta) = table.first().map_or((1, 1), |e| (e.l(), e.eta()));
        Ok(match objective {
            Objective::Integrated => Evaluator::Integrated { slot, table, l },
            _ => {
                let scale = estimate::enumerate_scale(l, eta)?;
                let dist = scale
                    .iter()
                    .map(|s| {
                        table
                            .iter()
                            .map(|t| estimate::proximity(s, t).map(|p| p.magnitude()))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                Evaluator::Median { slot, scale, dist }
            }
        })
    }

    fn allowed(&self, item: usize, bin: usize) -> bool {
        match self {
            Evaluator::Profit { profit } => profit[item][bin].is_some(),
            Evaluator::Integrated { slot, .. } | Evaluator::Median { slot, .. } => slot[item][bin].is_some(),
        }
    }

    fn scalar(&self, bins: &[Option<usize>]) -> S {
        let Evaluator::Profit { profit } = self else {
            unreachable!("scalar value of an estimate objective")
        };
        bins.iter()
            .enumerate()
            .filter_map(|(i, b)| b.and_then(|b| profit[i][b]))
            .fold(S::zero(), |acc, p| acc + p)
    }

    fn estimate(&self, bins: &[Option<usize>]) -> Option<MsEstimate> {
        match self {
            Evaluator::Profit { .. } => unreachable!("estimate value of a scalar objective"),
            Evaluator::Integrated { slot, table, l } => {
                let mut counts = vec![0u32; *l];
                for (i, b) in bins.iter().enumerate() {
                    if let Some(t) = b.and_then(|b| slot[i][b]) {
                        for (c, x) in counts.iter_mut().zip(table[t].counts()) {
                            *c += x;
                        }
                    }
                }
                Some(MsEstimate::new(counts).expect("non-empty level vector"))
            }
            Evaluator::Median { slot, scale, dist } => {
                let members: Vec<usize> = bins
                    .iter()
                    .enumerate()
                    .filter_map(|(i, b)| b.and_then(|b| slot[i][b]))
                    .collect();
                if members.is_empty() {
                    return None;
                }
                let mut best: Option<(usize, u64)> = None;
                for (s, row) in dist.iter().enumerate() {
                    let d: u64 = members.iter().map(|&t| row[t]).sum();
                    if best.is_none_or(|(_, bd)| d < bd) {
                        best = Some((s, d));
                    }
                }
                best.map(|(s, _)| scale[s].clone())
            }
        }
    }
}

/// Calls `visit` once per feasible assignment of the model (for subset
/// models, once per feasible packed set).
fn enumerate<S: Scalar>(
    model: &ModelKind<S>,
    items: &[MseItem<S>],
    eval: &Evaluator<S>,
    limits: &ExactLimits,
    mut visit: impl FnMut(&[Option<usize>]),
) -> Result<()> {
    let n = items.len();
    let weights: Vec<S> = items.iter().map(|i| i.weight).collect();
    if let Some(item) = items.iter().find(|i| !i.weight.is_positive()) {
        return Err(Error::InvalidInstance(format!(
            "item {} has a non-positive weight",
            item.id
        )));
    }
    match model {
        ModelKind::Knapsack { capacity } => {
            limits.check("knapsack instance", n, limits.knapsack_items.min(MASK_ITEMS_MAX))?;
            subset_packings(&weights, &[*capacity], &vec![0; n], &mut visit);
        }
        ModelKind::MultipleKnapsack { capacities } => {
            check_multi(limits, n, capacities.len())?;
            subset_packings(&weights, capacities, &vec![0; n], &mut visit);
        }
        ModelKind::InverseBpp { bins, capacity } => {
            check_multi(limits, n, *bins)?;
            subset_packings(&weights, &vec![*capacity; *bins], &vec![0; n], &mut visit);
        }
        ModelKind::ConflictInverse {
            bins,
            capacity,
            conflicts,
        } => {
            check_multi(limits, n, *bins)?;
            let ids: Vec<ItemId> = items.iter().map(|i| i.id).collect();
            let masks = conflicts.masks(&ids)?;
            subset_packings(&weights, &vec![*capacity; *bins], &masks, &mut visit);
        }
        ModelKind::MultipleChoice { capacity } => {
            limits.check("multiple-choice instance", n, limits.knapsack_items)?;
            multiple_choice_combinations(items, *capacity, &mut visit)?;
        }
        ModelKind::GeneralizedAssignment { capacities, relaxation } => {
            check_multi(limits, n, capacities.len())?;
            let allowed: Vec<Vec<bool>> = (0..n)
                .map(|i| (0..capacities.len()).map(|j| eval.allowed(i, j)).collect())
                .collect();
            let mut loads = vec![S::zero(); capacities.len()];
            let mut bins = vec![None; n];
            assignment_search(
                &weights,
                capacities,
                &allowed,
                *relaxation == Relaxation::AllowPartial,
                0,
                &mut loads,
                &mut bins,
                &mut visit,
            );
        }
    }
    Ok(())
}

fn check_multi(limits: &ExactLimits, n: usize, k: usize) -> Result<()> {
    limits.check("multi-container instance", n, limits.multi_items.min(MASK_ITEMS_MAX))?;
    limits.check("number of containers", k, limits.multi_bins)
}

/// Builds, bin by bin, the family of item sets packable into the first `j`
/// bins; each reachable set stores the subset placed in bin `j - 1` as a
/// witness. Sets reaching the last layer are visited with the
/// reconstructed assignment.
fn subset_packings<S: Scalar>(
    weights: &[S],
    capacities: &[S],
    conflicts: &[u64],
    visit: &mut impl FnMut(&[Option<usize>]),
) {
    const UNSEEN: u32 = u32::MAX;
    let n = weights.len();
    let size = 1usize << n;
    let full = (size - 1) as u32;
    let mut load = vec![S::zero(); size];
    let mut clean = vec![true; size];
    for m in 1..size {
        let low = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        load[m] = load[rest] + weights[low];
        clean[m] = clean[rest] && conflicts[low] & m as u64 == 0;
    }
    let mut layers: Vec<Vec<u32>> = vec![vec![UNSEEN; size]];
    layers[0][0] = 0;
    for &cap in capacities {
        let current = layers.last().expect("layer 0 exists");
        let mut next = vec![UNSEEN; size];
        for a in 0..size as u32 {
            if current[a as usize] == UNSEEN {
                continue;
            }
            let comp = full ^ a;
            let mut sub = comp;
            loop {
                let u = (a | sub) as usize;
                if next[u] == UNSEEN && clean[sub as usize] && load[sub as usize] <= cap {
                    next[u] = sub;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & comp;
            }
        }
        layers.push(next);
    }
    let k = capacities.len();
    let mut bins = vec![None; n];
    for set in 0..size {
        if layers[k][set] == UNSEEN {
            continue;
        }
        bins.fill(None);
        let mut rest = set as u32;
        for j in (0..k).rev() {
            let mut part = layers[j + 1][rest as usize];
            rest ^= part;
            while part != 0 {
                bins[part.trailing_zeros() as usize] = Some(j);
                part &= part - 1;
            }
        }
        visit(&bins);
    }
}

fn multiple_choice_combinations<S: Scalar>(
    items: &[MseItem<S>],
    capacity: S,
    visit: &mut impl FnMut(&[Option<usize>]),
) -> Result<()> {
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, item) in items.iter().enumerate() {
        let g = item
            .group
            .ok_or_else(|| Error::InvalidInstance(format!("item {} has no group", item.id)))?;
        groups.entry(g).or_default().push(i);
    }
    if groups.is_empty() {
        return Err(Error::EmptyInput("multiple-choice model needs at least one group"));
    }
    let minima: Vec<(u32, S)> = groups
        .iter()
        .map(|(&g, members)| {
            let min = members
                .iter()
                .map(|&i| items[i].weight)
                .min_by(|a, b| a.total_cmp(b))
                .expect("groups are non-empty");
            (g, min)
        })
        .collect();
    let need = minima.iter().fold(S::zero(), |acc, (_, w)| acc + *w);
    if need > capacity {
        let listed: Vec<String> = minima
            .iter()
            .map(|(g, w)| format!("group {g} (lightest {w})"))
            .collect();
        return Err(Error::Infeasible(format!(
            "lightest choices need {need} > capacity {capacity}: {}",
            listed.join(", ")
        )));
    }
    let groups: Vec<Vec<usize>> = groups.into_values().collect();
    let mut bins = vec![None; items.len()];

    fn descend<S: Scalar>(
        items: &[MseItem<S>],
        groups: &[Vec<usize>],
        g: usize,
        load: S,
        capacity: S,
        bins: &mut Vec<Option<usize>>,
        visit: &mut impl FnMut(&[Option<usize>]),
    ) {
        if g == groups.len() {
            visit(bins);
            return;
        }
        for &i in &groups[g] {
            let next = load + items[i].weight;
            if next <= capacity {
                bins[i] = Some(0);
                descend(items, groups, g + 1, next, capacity, bins, visit);
                bins[i] = None;
            }
        }
    }
    descend(items, &groups, 0, S::zero(), capacity, &mut bins, visit);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn assignment_search<S: Scalar>(
    weights: &[S],
    capacities: &[S],
    allowed: &[Vec<bool>],
    partial: bool,
    i: usize,
    loads: &mut [S],
    bins: &mut [Option<usize>],
    visit: &mut impl FnMut(&[Option<usize>]),
) {
    if i == weights.len() {
        visit(bins);
        return;
    }
    for j in 0..capacities.len() {
        if allowed[i][j] && loads[j] + weights[i] <= capacities[j] {
            loads[j] = loads[j] + weights[i];
            bins[i] = Some(j);
            assignment_search(weights, capacities, allowed, partial, i + 1, loads, bins, visit);
            bins[i] = None;
            loads[j] = loads[j] - weights[i];
        }
    }
    if partial {
        assignment_search(weights, capacities, allowed, partial, i + 1, loads, bins, visit);
    }
}
