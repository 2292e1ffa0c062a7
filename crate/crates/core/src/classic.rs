//! Classic one-dimensional bin packing: instances, solutions, feasibility,
//! fitting heuristics, the continuous lower bound and an exact solver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::ExactLimits;
use crate::scalar::{self, Scalar};
use crate::Rational;

/// Identifier of an item, unique within an instance.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ItemId(pub u32);

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for ItemId {
    fn from(v: u32) -> Self {
        ItemId(v)
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct PackItem<S = Rational> {
    pub id: ItemId,
    pub weight: S,
}

#[derive(Clone, PartialEq, Debug)]
pub struct PackInstance<S = Rational> {
    items: Vec<PackItem<S>>,
    capacity: S,
    max_bins: Option<usize>,
}

impl<S: Scalar> PackInstance<S> {
    /// Validates `0 < weight ≤ capacity` and id uniqueness.
    pub fn new(items: Vec<PackItem<S>>, capacity: S, max_bins: Option<usize>) -> Result<Self> {
        if !capacity.is_positive() {
            return Err(Error::InvalidInstance("capacity must be positive".into()));
        }
        if max_bins == Some(0) {
            return Err(Error::InvalidInstance("max_bins must be at least 1".into()));
        }
        let mut seen = BTreeSet::new();
        for item in &items {
            if !seen.insert(item.id) {
                return Err(Error::InvalidInstance(format!("duplicate item id {}", item.id)));
            }
            if !item.weight.is_positive() {
                return Err(Error::InvalidInstance(format!(
                    "item {}: weight must be positive",
                    item.id
                )));
            }
            if item.weight > capacity {
                return Err(Error::InvalidInstance(format!(
                    "item {}: weight {} exceeds capacity {}",
                    item.id, item.weight, capacity
                )));
            }
        }
        Ok(PackInstance {
            items,
            capacity,
            max_bins,
        })
    }

    /// Items numbered `1..=n` in the given order.
    pub fn from_weights(weights: &[S], capacity: S) -> Result<Self> {
        let items = weights
            .iter()
            .enumerate()
            .map(|(i, &w)| PackItem {
                id: ItemId(i as u32 + 1),
                weight: w,
            })
            .collect();
        PackInstance::new(items, capacity, None)
    }

    pub fn with_max_bins(mut self, max_bins: usize) -> Result<Self> {
        if max_bins == 0 {
            return Err(Error::InvalidInstance("max_bins must be at least 1".into()));
        }
        self.max_bins = Some(max_bins);
        Ok(self)
    }

    pub fn items(&self) -> &[PackItem<S>] {
        &self.items
    }

    pub fn capacity(&self) -> S {
        self.capacity
    }

    pub fn max_bins(&self) -> Option<usize> {
        self.max_bins
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn total_weight(&self) -> S {
        scalar::sum(self.items.iter().map(|i| i.weight))
    }

    pub fn weight_of(&self, id: ItemId) -> Option<S> {
        self.items.iter().find(|i| i.id == id).map(|i| i.weight)
    }

    pub(crate) fn weight_map(&self) -> BTreeMap<ItemId, S> {
        self.items.iter().map(|i| (i.id, i.weight)).collect()
    }
}

/// Items grouped into bins; `unassigned` holds items left out of a partial
/// solution.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct PackSolution {
    pub bins: Vec<Vec<ItemId>>,
    #[serde(default)]
    pub unassigned: Vec<ItemId>,
}

impl PackSolution {
    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    pub fn assigned_count(&self) -> usize {
        self.bins.iter().map(Vec::len).sum()
    }

    /// Bin index of every assigned item.
    pub fn bin_of(&self) -> BTreeMap<ItemId, usize> {
        self.bins
            .iter()
            .enumerate()
            .flat_map(|(b, items)| items.iter().map(move |&id| (id, b)))
            .collect()
    }

    /// Bins from a `bin index per item` vector (in item order), dropping
    /// empty bins.
    pub(crate) fn from_assignment(ids: &[ItemId], assignment: &[Option<usize>]) -> Self {
        let used = assignment.iter().flatten().max().map_or(0, |&m| m + 1);
        let mut bins = vec![Vec::new(); used];
        let mut unassigned = Vec::new();
        for (&id, slot) in ids.iter().zip(assignment) {
            match slot {
                Some(b) => bins[*b].push(id),
                None => unassigned.push(id),
            }
        }
        bins.retain(|b| !b.is_empty());
        PackSolution { bins, unassigned }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub enum Violation<S = Rational> {
    /// Bin load exceeds capacity by `overflow` (bin index is 0-based).
    Overflow {
        bin: usize,
        overflow: S,
    },
    MissingItem(ItemId),
    DuplicateItem(ItemId),
    EmptyBin(usize),
    TooManyBins {
        used: usize,
        max: usize,
    },
}

impl<S: Scalar> fmt::Display for Violation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Overflow { bin, overflow } => write!(f, "bin {} overflow {}", bin + 1, overflow),
            Violation::MissingItem(id) => write!(f, "item {id} missing from solution"),
            Violation::DuplicateItem(id) => write!(f, "item {id} placed more than once"),
            Violation::EmptyBin(b) => write!(f, "bin {} is empty", b + 1),
            Violation::TooManyBins { used, max } => write!(f, "{used} bins used, at most {max} allowed"),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct FeasibilityReport<S = Rational> {
    pub violations: Vec<Violation<S>>,
    pub bins_used: usize,
}

impl<S> FeasibilityReport<S> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks capacities, the exact partition of items over bins and
/// `unassigned`, and the bin-count bound when `max_bins` is set.
pub fn validate<S: Scalar>(instance: &PackInstance<S>, solution: &PackSolution) -> Result<FeasibilityReport<S>> {
    let weights = instance.weight_map();
    let mut seen: BTreeMap<ItemId, usize> = BTreeMap::new();
    let mut violations = Vec::new();
    let all_ids = solution.bins.iter().flatten().chain(&solution.unassigned);
    for id in all_ids {
        if !weights.contains_key(id) {
            return Err(Error::Structural(format!("unknown item id {id} in solution")));
        }
        *seen.entry(*id).or_default() += 1;
    }
    for (b, bin) in solution.bins.iter().enumerate() {
        if bin.is_empty() {
            violations.push(Violation::EmptyBin(b));
            continue;
        }
        let load = scalar::sum(bin.iter().map(|id| weights[id]));
        if load > instance.capacity {
            violations.push(Violation::Overflow {
                bin: b,
                overflow: load - instance.capacity,
            });
        }
    }
    for item in &instance.items {
        match seen.get(&item.id) {
            None => violations.push(Violation::MissingItem(item.id)),
            Some(&n) if n > 1 => violations.push(Violation::DuplicateItem(item.id)),
            _ => {}
        }
    }
    if let Some(max) = instance.max_bins {
        if solution.bins.len() > max {
            violations.push(Violation::TooManyBins {
                used: solution.bins.len(),
                max,
            });
        }
    }
    Ok(FeasibilityReport {
        violations,
        bins_used: solution.bins.len(),
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FitPolicy {
    NextFit,
    FirstFit,
    BestFit,
    WorstFit,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ItemOrder {
    AsGiven,
    /// Weight descending, ties by id ascending.
    Decreasing,
}

/// Item indices in the requested processing order.
pub(crate) fn ordered_indices<S: Scalar>(items: &[PackItem<S>], order: ItemOrder) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..items.len()).collect();
    if order == ItemOrder::Decreasing {
        idx.sort_by(|&a, &b| {
            items[b]
                .weight
                .total_cmp(&items[a].weight)
                .then(items[a].id.cmp(&items[b].id))
        });
    }
    idx
}

/// Runs one of the classical fitting heuristics. Residual ties go to the
/// lowest bin index.
pub fn fit_pack<S: Scalar>(instance: &PackInstance<S>, policy: FitPolicy, order: ItemOrder) -> PackSolution {
    let cap = instance.capacity;
    let mut bins: Vec<Vec<ItemId>> = Vec::new();
    let mut loads: Vec<S> = Vec::new();
    for i in ordered_indices(&instance.items, order) {
        let item = &instance.items[i];
        let fits = |load: &S| *load + item.weight <= cap;
        let target = match policy {
            FitPolicy::NextFit => loads.last().filter(|l| fits(l)).map(|_| loads.len() - 1),
            FitPolicy::FirstFit => loads.iter().position(fits),
            FitPolicy::BestFit => pick_bin(&loads, fits, |a, b| a > b),
            FitPolicy::WorstFit => pick_bin(&loads, fits, |a, b| a < b),
        };
        match target {
            Some(b) => {
                bins[b].push(item.id);
                loads[b] = loads[b] + item.weight;
            }
            None => {
                bins.push(vec![item.id]);
                loads.push(item.weight);
            }
        }
    }
    PackSolution {
        bins,
        unassigned: Vec::new(),
    }
}

/// First feasible bin whose load beats every other feasible load under
/// `better`.
fn pick_bin<S: Scalar>(loads: &[S], fits: impl Fn(&S) -> bool, better: impl Fn(&S, &S) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (b, load) in loads.iter().enumerate() {
        if fits(load) && best.is_none_or(|cur| better(load, &loads[cur])) {
            best = Some(b);
        }
    }
    best
}

/// `⌈Σ weights / capacity⌉`.
pub fn lower_bound<S: Scalar>(instance: &PackInstance<S>) -> usize {
    (instance.total_weight() / instance.capacity).ceil_to_usize()
}

/// Minimum-bin packing by branch and bound.
pub fn exact_min_bins<S: Scalar>(instance: &PackInstance<S>, limits: &ExactLimits) -> Result<PackSolution> {
    limits.check("bin packing instance", instance.len(), limits.bpp_items)?;
    let no_conflicts = vec![0u64; instance.len()];
    Ok(min_bins_search(instance, &no_conflicts))
}

/// Branch and bound over item→bin assignments in decreasing-weight order.
/// `conflicts[i]` is a bitmask of instance indices that may not share a bin
/// with item `i`. The caller guarantees `n ≤ 64`.
pub(crate) fn min_bins_search<S: Scalar>(instance: &PackInstance<S>, conflicts: &[u64]) -> PackSolution {
    let n = instance.len();
    let ids: Vec<ItemId> = instance.items.iter().map(|i| i.id).collect();
    if n == 0 {
        return PackSolution::default();
    }
    let order = ordered_indices(&instance.items, ItemOrder::Decreasing);
    let weights: Vec<S> = order.iter().map(|&i| instance.items[i].weight).collect();
    // remap conflicts into search order
    let pos: Vec<usize> = {
        let mut p = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            p[i] = k;
        }
        p
    };
    let conf: Vec<u64> = order
        .iter()
        .map(|&i| {
            (0..n)
                .filter(|&j| conflicts[i] >> j & 1 == 1)
                .fold(0u64, |m, j| m | 1 << pos[j])
        })
        .collect();

    let mut search = BinSearch {
        weights: &weights,
        conflicts: &conf,
        cap: instance.capacity,
        loads: Vec::new(),
        members: Vec::new(),
        current: vec![0; n],
        best: (0..n).collect(),
        best_count: n + 1,
        lower: lower_bound(instance).max(1),
    };
    // Seed the incumbent with first-fit decreasing honouring conflicts.
    let mut seed = vec![0usize; n];
    let mut loads: Vec<S> = Vec::new();
    let mut masks: Vec<u64> = Vec::new();
    for k in 0..n {
        let b = (0..loads.len()).find(|&b| loads[b] + weights[k] <= search.cap && masks[b] & conf[k] == 0);
        let b = b.unwrap_or_else(|| {
            loads.push(S::zero());
            masks.push(0);
            loads.len() - 1
        });
        loads[b] = loads[b] + weights[k];
        masks[b] |= 1 << k;
        seed[k] = b;
    }
    search.best = seed;
    search.best_count = loads.len();
    if search.best_count > search.lower {
        search.descend(0);
    }
    let mut assignment = vec![None; n];
    for (k, &i) in order.iter().enumerate() {
        assignment[i] = Some(search.best[k]);
    }
    // Renumber bins by first appearance in instance order.
    let mut remap = BTreeMap::new();
    for slot in assignment.iter_mut().flatten() {
        let next = remap.len();
        *slot = *remap.entry(*slot).or_insert(next);
    }
    PackSolution::from_assignment(&ids, &assignment)
}

struct BinSearch<'a, S> {
    weights: &'a [S],
    conflicts: &'a [u64],
    cap: S,
    loads: Vec<S>,
    members: Vec<u64>,
    current: Vec<usize>,
    best: Vec<usize>,
    best_count: usize,
    lower: usize,
}

impl<S: Scalar> BinSearch<'_, S> {
    fn descend(&mut self, k: usize) -> bool {
        if k == self.weights.len() {
            self.best_count = self.loads.len();
            self.best.clone_from(&self.current);
            return self.best_count <= self.lower;
        }
        let w = self.weights[k];
        let mut tried: Vec<S> = Vec::new();
        for b in 0..self.loads.len() {
            let load = self.loads[b];
            if load + w > self.cap || self.members[b] & self.conflicts[k] != 0 {
                continue;
            }
            // Bins with equal load are interchangeable when no conflicts apply.
            if self.conflicts[k] == 0 && tried.contains(&load) {
                continue;
            }
            tried.push(load);
            self.loads[b] = load + w;
            self.members[b] |= 1 << k;
            self.current[k] = b;
            if self.descend(k + 1) {
                return true;
            }
            self.loads[b] = load;
            self.members[b] &= !(1 << k);
        }
        if self.loads.len() + 1 < self.best_count {
            self.loads.push(w);
            self.members.push(1 << k);
            self.current[k] = self.loads.len() - 1;
            let done = self.descend(k + 1);
            self.loads.pop();
            self.members.pop();
            if done {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    fn q(n: i64, d: i64) -> Rational {
        Ratio::new(n, d)
    }

    fn inst(weights: &[Rational]) -> PackInstance {
        PackInstance::from_weights(weights, q(1, 1)).unwrap()
    }

    fn ids(v: &[&[u32]]) -> Vec<Vec<ItemId>> {
        v.iter().map(|b| b.iter().map(|&i| ItemId(i)).collect()).collect()
    }

    #[test]
    fn validate_examples() {
        let i = inst(&[q(1, 2), q(1, 2)]);
        let s = PackSolution {
            bins: ids(&[&[1, 2]]),
            unassigned: vec![],
        };
        assert!(validate(&i, &s).unwrap().is_ok());

        let i = inst(&[q(3, 5), q(3, 5)]);
        let r = validate(&i, &s).unwrap();
        assert_eq!(
            r.violations,
            vec![Violation::Overflow {
                bin: 0,
                overflow: q(1, 5)
            }]
        );

        // weights chosen to match a six-item, three-bin drawing
        let i = inst(&[q(1, 2), q(45, 100), q(55, 100), q(3, 4), q(45, 100), q(1, 4)]);
        let s = PackSolution {
            bins: ids(&[&[1, 2], &[3, 5], &[4, 6]]),
            unassigned: vec![],
        };
        let r = validate(&i, &s).unwrap();
        assert!(r.is_ok(), "{:?}", r.violations);
        assert_eq!(r.bins_used, 3);
    }

    #[test]
    fn validate_detects_structure() {
        let i = inst(&[q(1, 2), q(1, 2)]).with_max_bins(1).unwrap();
        let s = PackSolution {
            bins: ids(&[&[1], &[], &[1]]),
            unassigned: vec![],
        };
        let r = validate(&i, &s).unwrap();
        assert!(r.violations.contains(&Violation::EmptyBin(1)));
        assert!(r.violations.contains(&Violation::MissingItem(ItemId(2))));
        assert!(r.violations.contains(&Violation::DuplicateItem(ItemId(1))));
        assert!(r.violations.contains(&Violation::TooManyBins { used: 3, max: 1 }));
        let bad = PackSolution {
            bins: ids(&[&[9]]),
            unassigned: vec![],
        };
        assert!(matches!(validate(&i, &bad), Err(Error::Structural(_))));
    }

    #[test]
    fn instance_rejects_bad_weights() {
        assert!(PackInstance::from_weights(&[q(0, 1)], q(1, 1)).is_err());
        assert!(PackInstance::from_weights(&[q(3, 2)], q(1, 1)).is_err());
        let dup = vec![
            PackItem {
                id: ItemId(1),
                weight: q(1, 2),
            },
            PackItem {
                id: ItemId(1),
                weight: q(1, 2),
            },
        ];
        assert!(PackInstance::new(dup, q(1, 1), None).is_err());
    }

    #[test]
    fn fit_pack_examples() {
        let half = inst(&[q(1, 2); 4]);
        assert_eq!(
            fit_pack(&half, FitPolicy::FirstFit, ItemOrder::AsGiven).bins,
            ids(&[&[1, 2], &[3, 4]])
        );
        let mixed = inst(&[q(6, 10), q(5, 10), q(4, 10), q(3, 10), q(2, 10)]);
        assert_eq!(
            fit_pack(&mixed, FitPolicy::FirstFit, ItemOrder::Decreasing).bins,
            ids(&[&[1, 3], &[2, 4, 5]])
        );
        assert_eq!(
            fit_pack(&mixed, FitPolicy::NextFit, ItemOrder::AsGiven).bins,
            ids(&[&[1], &[2, 3], &[4, 5]])
        );
    }

    #[test]
    fn best_and_worst_fit_choose_by_residual() {
        // loads after the first three items: 0.7, 0.5, 0.6 (all separate)
        let i = inst(&[q(7, 10), q(5, 10), q(6, 10), q(3, 10)]);
        let best = fit_pack(&i, FitPolicy::BestFit, ItemOrder::AsGiven);
        assert_eq!(best.bins, ids(&[&[1, 4], &[2], &[3]]));
        let worst = fit_pack(&i, FitPolicy::WorstFit, ItemOrder::AsGiven);
        assert_eq!(worst.bins, ids(&[&[1], &[2, 4], &[3]]));
        // equal residuals: lowest index wins
        let tie = inst(&[q(1, 2), q(1, 2), q(1, 4)]);
        let tie = PackInstance::new(tie.items().to_vec(), q(3, 4), None).unwrap();
        assert_eq!(
            fit_pack(&tie, FitPolicy::BestFit, ItemOrder::AsGiven).bins,
            ids(&[&[1, 3], &[2]])
        );
        assert_eq!(
            fit_pack(&tie, FitPolicy::WorstFit, ItemOrder::AsGiven).bins,
            ids(&[&[1, 3], &[2]])
        );
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(lower_bound(&inst(&[q(1, 2), q(1, 2)])), 1);
        assert_eq!(lower_bound(&inst(&[q(3, 5), q(3, 5)])), 2);
        let col3 = PackInstance::from_weights(
            &[10, 9, 6, 5, 7].map(Rational::from_integer),
            Rational::from_integer(20),
        )
        .unwrap();
        assert_eq!(lower_bound(&col3), 2);
    }

    #[test]
    fn exact_examples() {
        let limits = ExactLimits::default();
        assert_eq!(exact_min_bins(&inst(&[q(1, 2); 4]), &limits).unwrap().bin_count(), 2);
        assert_eq!(exact_min_bins(&inst(&[q(2, 5); 3]), &limits).unwrap().bin_count(), 2);
        let big = inst(&vec![q(1, 2); 21]);
        assert!(matches!(exact_min_bins(&big, &limits), Err(Error::SizeLimit { .. })));
        assert_eq!(exact_min_bins(&inst(&[]), &limits).unwrap().bin_count(), 0);
    }

    #[test]
    fn exact_beats_ffd_where_ffd_is_suboptimal() {
        // FFD packs 0.5,0.3 | 0.4,0.4 | 0.2,0.2,... ; optimum is 2 bins
        let i = inst(&[q(5, 10), q(4, 10), q(4, 10), q(3, 10), q(2, 10), q(2, 10)]);
        let ffd = fit_pack(&i, FitPolicy::FirstFit, ItemOrder::Decreasing);
        let exact = exact_min_bins(&i, &ExactLimits::default()).unwrap();
        assert!(validate(&i, &exact).unwrap().is_ok());
        assert_eq!(exact.bin_count(), 2);
        assert!(ffd.bin_count() >= exact.bin_count());
    }

    #[test]
    fn float_weights_work() {
        let i = PackInstance::from_weights(&[0.5f64, 0.5, 0.5], 1.0).unwrap();
        assert_eq!(fit_pack(&i, FitPolicy::FirstFit, ItemOrder::AsGiven).bin_count(), 2);
        assert_eq!(exact_min_bins(&i, &ExactLimits::default()).unwrap().bin_count(), 2);
    }
}
