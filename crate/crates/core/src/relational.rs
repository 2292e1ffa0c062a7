//! Relations over items and bins, constraint checking, bin packing with
//! conflicts and profit-maximizing packing into a fixed number of bins.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::classic::{self, ItemId, ItemOrder, PackInstance, PackSolution};
use crate::error::{Error, Result};
use crate::limits::ExactLimits;
use crate::scalar::{self, Scalar};

/// Binary relations constraining a packing. Bins are numbered from 1 in
/// `correspondence` and `bin_importance`, matching the position of a bin in
/// [`PackSolution::bins`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RelationSet {
    /// Grade of placing an item into bin `j + 1`; 0 forbids it. Items
    /// without a row are unconstrained; bins past the end of a row are
    /// treated as grade 0.
    pub correspondence: Option<BTreeMap<ItemId, Vec<u32>>>,
    /// Unordered conflicting pairs, stored as `(min, max)`.
    pub conflicts: BTreeSet<(ItemId, ItemId)>,
    /// Compatibility grades as given (possibly asymmetric). Grade 0 forbids
    /// sharing a bin; positive grades are advisory.
    pub compatibility: BTreeMap<(ItemId, ItemId), u32>,
    /// `(a, b)`: when both share a bin, `a` must come before `b`.
    pub precedence: Vec<(ItemId, ItemId)>,
    /// `(a, b)`: `a` is at least as important as `b`.
    pub item_dominance: Vec<(ItemId, ItemId)>,
    /// `(a, b)`: bin `a` is more important than bin `b`. Stored, not enforced.
    pub bin_importance: Vec<(usize, usize)>,
}

fn ordered_pair(a: ItemId, b: ItemId) -> (ItemId, ItemId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// True when the directed graph has no cycle (self-loops count as cycles).
pub fn is_acyclic<T: Ord + Copy>(edges: &[(T, T)]) -> bool {
    topological_order(edges, |a: &T, b: &T| a.cmp(b)).is_some()
}

/// Kahn's algorithm over the nodes touched by `edges`; ready nodes are
/// released in `tie` order. `None` on a cycle.
fn topological_order<T: Ord + Copy>(edges: &[(T, T)], tie: impl Fn(&T, &T) -> std::cmp::Ordering) -> Option<Vec<T>> {
    let mut indegree: BTreeMap<T, usize> = BTreeMap::new();
    let mut succ: BTreeMap<T, Vec<T>> = BTreeMap::new();
    for &(a, b) in edges {
        indegree.entry(a).or_default();
        *indegree.entry(b).or_default() += 1;
        succ.entry(a).or_default().push(b);
    }
    let mut ready: Vec<T> = indegree.iter().filter(|(_, &d)| d == 0).map(|(&n, _)| n).collect();
    let mut out = Vec::with_capacity(indegree.len());
    while !ready.is_empty() {
        ready.sort_by(&tie);
        let node = ready.remove(0);
        out.push(node);
        for next in succ.get(&node).into_iter().flatten() {
            let d = indegree.get_mut(next).expect("edge endpoint registered");
            *d -= 1;
            if *d == 0 {
                ready.push(*next);
            }
        }
    }
    (out.len() == indegree.len()).then_some(out)
}

impl RelationSet {
    pub fn add_conflict(&mut self, a: ItemId, b: ItemId) {
        self.conflicts.insert(ordered_pair(a, b));
    }

    pub fn in_conflict(&self, a: ItemId, b: ItemId) -> bool {
        self.conflicts.contains(&ordered_pair(a, b))
    }

    /// Conflicts from a grade matrix (row `i`, column `j` for items
    /// `ids[i]`, `ids[j]`): any non-zero off-diagonal entry in either
    /// orientation marks the pair as conflicting.
    pub fn conflicts_from_matrix(ids: &[ItemId], matrix: &[Vec<Option<u32>>]) -> BTreeSet<(ItemId, ItemId)> {
        let mut out = BTreeSet::new();
        for (i, row) in matrix.iter().enumerate() {
            for (j, grade) in row.iter().enumerate() {
                if i != j && grade.is_some_and(|g| g > 0) {
                    out.insert(ordered_pair(ids[i], ids[j]));
                }
            }
        }
        out
    }

    /// Checks well-formedness: acyclic precedence and dominance graphs,
    /// irreflexive conflicts.
    pub fn validate(&self) -> Result<()> {
        if self.conflicts.iter().any(|(a, b)| a == b) {
            return Err(Error::InvalidInstance("an item cannot conflict with itself".into()));
        }
        if !is_acyclic(&self.precedence) {
            return Err(Error::Cycle("precedence relation"));
        }
        if !is_acyclic(&self.item_dominance) {
            return Err(Error::Cycle("item dominance graph"));
        }
        if !is_acyclic(&self.bin_importance) {
            return Err(Error::Cycle("bin importance graph"));
        }
        Ok(())
    }

    /// Every item id mentioned by the relations.
    pub fn referenced_items(&self) -> BTreeSet<ItemId> {
        let mut ids = BTreeSet::new();
        if let Some(rows) = &self.correspondence {
            ids.extend(rows.keys().copied());
        }
        for &(a, b) in self
            .conflicts
            .iter()
            .chain(self.compatibility.keys())
            .chain(&self.precedence)
            .chain(&self.item_dominance)
        {
            ids.insert(a);
            ids.insert(b);
        }
        ids
    }

    fn compatibility_forbids(&self, a: ItemId, b: ItemId) -> bool {
        self.compatibility.get(&(a, b)) == Some(&0) || self.compatibility.get(&(b, a)) == Some(&0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationViolation {
    /// Item placed in a bin (1-based) with correspondence grade 0.
    Correspondence {
        item: ItemId,
        bin: usize,
    },
    /// Dominant item left out while a dominated one was packed.
    Dominance {
        dominant: ItemId,
        dominated: ItemId,
    },
    /// `before` must precede `after` in their shared bin.
    Precedence {
        before: ItemId,
        after: ItemId,
        bin: usize,
    },
    Conflict {
        a: ItemId,
        b: ItemId,
        bin: usize,
    },
    Compatibility {
        a: ItemId,
        b: ItemId,
        bin: usize,
    },
}

impl fmt::Display for RelationViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationViolation::Correspondence { item, bin } => {
                write!(f, "item {item} may not be placed in bin {bin}")
            }
            RelationViolation::Dominance { dominant, dominated } => {
                write!(f, "item {dominant} left out while dominated item {dominated} is packed")
            }
            RelationViolation::Precedence { before, after, bin } => {
                write!(f, "bin {bin}: item {before} must precede item {after}")
            }
            RelationViolation::Conflict { a, b, bin } => write!(f, "bin {bin}: items {a} and {b} conflict"),
            RelationViolation::Compatibility { a, b, bin } => {
                write!(f, "bin {bin}: items {a} and {b} are incompatible")
            }
        }
    }
}

/// Lists every breach of the relation constraints by `solution`. Bins in
/// the records are 1-based.
pub fn check_constraints<S: Scalar>(
    instance: &PackInstance<S>,
    relations: &RelationSet,
    solution: &PackSolution,
) -> Result<Vec<RelationViolation>> {
    let known: BTreeSet<ItemId> = instance.items().iter().map(|i| i.id).collect();
    if let Some(id) = relations.referenced_items().into_iter().find(|id| !known.contains(id)) {
        return Err(Error::Structural(format!("relation references unknown item {id}")));
    }
    if let Some(id) = solution
        .bins
        .iter()
        .flatten()
        .chain(&solution.unassigned)
        .find(|id| !known.contains(id))
    {
        return Err(Error::Structural(format!("solution references unknown item {id}")));
    }

    let mut out = Vec::new();
    if let Some(rows) = &relations.correspondence {
        for (b, bin) in solution.bins.iter().enumerate() {
            for id in bin {
                if let Some(row) = rows.get(id) {
                    if row.get(b).copied().unwrap_or(0) == 0 {
                        out.push(RelationViolation::Correspondence { item: *id, bin: b + 1 });
                    }
                }
            }
        }
    }

    let bin_of = solution.bin_of();
    for &(dominant, dominated) in &relations.item_dominance {
        if !bin_of.contains_key(&dominant) && bin_of.contains_key(&dominated) {
            out.push(RelationViolation::Dominance { dominant, dominated });
        }
    }

    for (b, bin) in solution.bins.iter().enumerate() {
        let position: BTreeMap<ItemId, usize> = bin.iter().enumerate().map(|(p, &id)| (id, p)).collect();
        for &(before, after) in &relations.precedence {
            if let (Some(pa), Some(pb)) = (position.get(&before), position.get(&after)) {
                if pa > pb {
                    out.push(RelationViolation::Precedence {
                        before,
                        after,
                        bin: b + 1,
                    });
                }
            }
        }
        for (i, &x) in bin.iter().enumerate() {
            for &y in &bin[i + 1..] {
                let (a, c) = ordered_pair(x, y);
                if relations.in_conflict(a, c) {
                    out.push(RelationViolation::Conflict { a, b: c, bin: b + 1 });
                }
                if relations.compatibility_forbids(a, c) {
                    out.push(RelationViolation::Compatibility { a, b: c, bin: b + 1 });
                }
            }
        }
    }
    Ok(out)
}

/// Simple undirected conflict graph over item ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConflictGraph {
    edges: BTreeSet<(ItemId, ItemId)>,
}

impl ConflictGraph {
    pub fn new(edges: impl IntoIterator<Item = (ItemId, ItemId)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::InvalidInstance(format!("self-conflict on item {a}")));
            }
            set.insert(ordered_pair(a, b));
        }
        Ok(ConflictGraph { edges: set })
    }

    pub fn from_relations(relations: &RelationSet) -> Self {
        ConflictGraph {
            edges: relations.conflicts.clone(),
        }
    }

    /// Adds every pair whose combined weight exceeds the capacity.
    pub fn with_capacity_pairs<S: Scalar>(mut self, instance: &PackInstance<S>) -> Self {
        let items = instance.items();
        for (i, a) in items.iter().enumerate() {
            for b in &items[i + 1..] {
                if a.weight + b.weight > instance.capacity() {
                    self.edges.insert(ordered_pair(a.id, b.id));
                }
            }
        }
        self
    }

    pub fn edges(&self) -> impl Iterator<Item = &(ItemId, ItemId)> {
        self.edges.iter()
    }

    pub fn contains(&self, a: ItemId, b: ItemId) -> bool {
        self.edges.contains(&ordered_pair(a, b))
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Neighbour bitmask per position of `ids`. Unknown ids are an error.
    pub(crate) fn masks(&self, ids: &[ItemId]) -> Result<Vec<u64>> {
        let index: BTreeMap<ItemId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut masks = vec![0u64; ids.len()];
        for &(a, b) in &self.edges {
            let (Some(&i), Some(&j)) = (index.get(&a), index.get(&b)) else {
                return Err(Error::Structural(format!(
                    "conflict ({a},{b}) references an unknown item"
                )));
            };
            masks[i] |= 1 << j;
            masks[j] |= 1 << i;
        }
        Ok(masks)
    }

    /// Size of a clique grown greedily from each vertex in turn (largest
    /// found); a lower bound on the bins any conflict-free packing needs.
    pub fn greedy_clique_size(&self, ids: &[ItemId]) -> usize {
        let Ok(masks) = self.masks(ids) else { return 0 };
        let n = ids.len();
        let mut best = usize::from(n > 0);
        for start in 0..n {
            let mut clique = 1u64 << start;
            let mut candidates = masks[start];
            while candidates != 0 {
                let v = candidates.trailing_zeros() as usize;
                clique |= 1 << v;
                candidates &= masks[v];
            }
            best = best.max(clique.count_ones() as usize);
        }
        best
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SolveMode {
    Exact,
    Greedy,
}

/// Bin packing where conflicting items never share a bin.
pub fn conflict_pack<S: Scalar>(
    instance: &PackInstance<S>,
    graph: &ConflictGraph,
    mode: SolveMode,
    limits: &ExactLimits,
) -> Result<PackSolution> {
    let ids: Vec<ItemId> = instance.items().iter().map(|i| i.id).collect();
    if mode == SolveMode::Exact {
        limits.check("conflict bin packing instance", ids.len(), limits.bpp_items.min(64))?;
    }
    if mode == SolveMode::Greedy && ids.len() > 64 {
        return greedy_conflict_pack_large(instance, graph);
    }
    let masks = graph.masks(&ids)?;
    Ok(match mode {
        SolveMode::Exact => classic::min_bins_search(instance, &masks),
        SolveMode::Greedy => {
            let items = instance.items();
            let mut bins: Vec<Vec<ItemId>> = Vec::new();
            let mut loads: Vec<S> = Vec::new();
            let mut members: Vec<u64> = Vec::new();
            for i in classic::ordered_indices(items, ItemOrder::Decreasing) {
                let fits = (0..bins.len())
                    .find(|&b| loads[b] + items[i].weight <= instance.capacity() && members[b] & masks[i] == 0);
                match fits {
                    Some(b) => {
                        bins[b].push(items[i].id);
                        loads[b] = loads[b] + items[i].weight;
                        members[b] |= 1 << i;
                    }
                    None => {
                        bins.push(vec![items[i].id]);
                        loads.push(items[i].weight);
                        members.push(1 << i);
                    }
                }
            }
            PackSolution {
                bins,
                unassigned: Vec::new(),
            }
        }
    })
}

fn greedy_conflict_pack_large<S: Scalar>(instance: &PackInstance<S>, graph: &ConflictGraph) -> Result<PackSolution> {
    let items = instance.items();
    let known: BTreeSet<ItemId> = items.iter().map(|i| i.id).collect();
    if let Some((a, b)) = graph.edges().find(|(a, b)| !known.contains(a) || !known.contains(b)) {
        return Err(Error::Structural(format!(
            "conflict ({a},{b}) references an unknown item"
        )));
    }
    let mut bins: Vec<Vec<ItemId>> = Vec::new();
    let mut loads: Vec<S> = Vec::new();
    for i in classic::ordered_indices(items, ItemOrder::Decreasing) {
        let item = &items[i];
        let fits = (0..bins.len()).find(|&b| {
            loads[b] + item.weight <= instance.capacity() && bins[b].iter().all(|&o| !graph.contains(o, item.id))
        });
        match fits {
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
    Ok(PackSolution {
        bins,
        unassigned: Vec::new(),
    })
}

/// Result of packing into a fixed number of bins.
#[derive(Clone, Debug, PartialEq)]
pub struct InversePacking<S> {
    pub solution: PackSolution,
    pub profit: S,
}

/// Packs a subset of items into `instance.max_bins()` bins maximizing total
/// profit (unit profits when `profits` is `None`, i.e. maximum cardinality).
/// Unpacked items are returned in `unassigned`, the wait set.
pub fn inverse_pack<S: Scalar>(
    instance: &PackInstance<S>,
    profits: Option<&BTreeMap<ItemId, S>>,
    mode: SolveMode,
    limits: &ExactLimits,
) -> Result<InversePacking<S>> {
    let k = instance
        .max_bins()
        .ok_or_else(|| Error::InvalidInstance("inverse packing needs max_bins".into()))?;
    let items = instance.items();
    let profit: Vec<S> = items
        .iter()
        .map(|item| match profits {
            None => Ok(S::one()),
            Some(p) => p
                .get(&item.id)
                .copied()
                .ok_or_else(|| Error::InvalidInstance(format!("missing profit for item {}", item.id))),
        })
        .collect::<Result<_>>()?;
    if profit.iter().any(|p| *p < S::zero()) {
        return Err(Error::InvalidInstance("profits must be non-negative".into()));
    }
    let ids: Vec<ItemId> = items.iter().map(|i| i.id).collect();
    // Higher profit first, then lighter, then id.
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| {
        profit[b]
            .total_cmp(&profit[a])
            .then(items[a].weight.total_cmp(&items[b].weight))
            .then(ids[a].cmp(&ids[b]))
    });

    let assignment = match mode {
        SolveMode::Greedy => {
            let mut loads = vec![S::zero(); k];
            let mut assignment = vec![None; items.len()];
            let mut by_density = order.clone();
            by_density.sort_by(|&a, &b| {
                (profit[b] * items[a].weight)
                    .total_cmp(&(profit[a] * items[b].weight))
                    .then(ids[a].cmp(&ids[b]))
            });
            for i in by_density {
                if let Some(b) = (0..k).find(|&b| loads[b] + items[i].weight <= instance.capacity()) {
                    loads[b] = loads[b] + items[i].weight;
                    assignment[i] = Some(b);
                }
            }
            assignment
        }
        SolveMode::Exact => {
            limits.check("inverse bin packing instance", items.len(), limits.bpp_items)?;
            let weights: Vec<S> = order.iter().map(|&i| items[i].weight).collect();
            let gains: Vec<S> = order.iter().map(|&i| profit[i]).collect();
            let mut suffix = vec![S::zero(); gains.len() + 1];
            for t in (0..gains.len()).rev() {
                suffix[t] = suffix[t + 1] + gains[t];
            }
            let mut search = InverseSearch {
                weights: &weights,
                gains: &gains,
                suffix: &suffix,
                cap: instance.capacity(),
                loads: vec![S::zero(); k],
                used: 0,
                current: vec![None; weights.len()],
                best: vec![None; weights.len()],
                best_profit: S::zero(),
                value: S::zero(),
            };
            search.descend(0);
            let mut assignment = vec![None; items.len()];
            for (t, &i) in order.iter().enumerate() {
                assignment[i] = search.best[t];
            }
            assignment
        }
    };
    let total = scalar::sum(
        assignment
            .iter()
            .zip(&profit)
            .filter(|(slot, _)| slot.is_some())
            .map(|(_, p)| *p),
    );
    Ok(InversePacking {
        solution: PackSolution::from_assignment(&ids, &assignment),
        profit: total,
    })
}

struct InverseSearch<'a, S> {
    weights: &'a [S],
    gains: &'a [S],
    suffix: &'a [S],
    cap: S,
    loads: Vec<S>,
    used: usize,
    current: Vec<Option<usize>>,
    best: Vec<Option<usize>>,
    best_profit: S,
    value: S,
}

impl<S: Scalar> InverseSearch<'_, S> {
    fn descend(&mut self, t: usize) {
        if self.value > self.best_profit {
            self.best_profit = self.value;
            self.best.clone_from(&self.current);
        }
        if t == self.weights.len() || self.value + self.suffix[t] <= self.best_profit {
            return;
        }
        let w = self.weights[t];
        let open = (self.used + 1).min(self.loads.len());
        let mut tried: Vec<S> = Vec::new();
        for b in 0..open {
            let load = self.loads[b];
            if load + w > self.cap || tried.contains(&load) {
                continue;
            }
            tried.push(load);
            let was_used = self.used;
            self.used = self.used.max(b + 1);
            self.loads[b] = load + w;
            self.current[t] = Some(b);
            self.value = self.value + self.gains[t];
            self.descend(t + 1);
            self.value = self.value - self.gains[t];
            self.current[t] = None;
            self.loads[b] = load;
            self.used = was_used;
        }
        self.descend(t + 1);
    }
}

/// Reorders each bin into a topological order of the precedence pairs
/// restricted to its members. Ready items keep their original relative
/// order, so bins untouched by precedence are unchanged.
pub fn order_within_bins(solution: &PackSolution, precedence: &[(ItemId, ItemId)]) -> Result<PackSolution> {
    if !is_acyclic(precedence) {
        return Err(Error::Cycle("precedence relation"));
    }
    let bins = solution
        .bins
        .iter()
        .map(|bin| {
            let position: BTreeMap<ItemId, usize> = bin.iter().enumerate().map(|(p, &id)| (id, p)).collect();
            let edges: Vec<(ItemId, ItemId)> = precedence
                .iter()
                .filter(|(a, b)| position.contains_key(a) && position.contains_key(b))
                .copied()
                .collect();
            let order = topological_order(&edges, |a, b| position[a].cmp(&position[b]))
                .ok_or(Error::Cycle("precedence relation"))?;
            // Free items keep their slots; constrained items are laid out in
            // topological order over the slots they occupied.
            let mut slots: Vec<usize> = order.iter().map(|id| position[id]).collect();
            slots.sort_unstable();
            let mut merged = bin.clone();
            for (slot, id) in slots.into_iter().zip(order) {
                merged[slot] = id;
            }
            Ok(merged)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PackSolution {
        bins,
        unassigned: solution.unassigned.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn id(v: u32) -> ItemId {
        ItemId(v)
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn six_items() -> PackInstance {
        PackInstance::from_weights(
            &[q(1, 2), q(45, 100), q(55, 100), q(3, 4), q(45, 100), q(1, 4)],
            q(1, 1),
        )
        .unwrap()
    }

    fn fig4_precedence() -> Vec<(ItemId, ItemId)> {
        [(1, 2), (1, 5), (2, 4), (3, 5), (5, 4), (4, 6)]
            .iter()
            .map(|&(a, b)| (id(a), id(b)))
            .collect()
    }

    #[test]
    fn conflict_violation_is_reported() {
        let mut rel = RelationSet::default();
        rel.add_conflict(id(1), id(2));
        let sol = PackSolution {
            bins: vec![vec![id(1), id(2)], vec![id(3), id(5)], vec![id(4), id(6)]],
            unassigned: vec![],
        };
        let v = check_constraints(&six_items(), &rel, &sol).unwrap();
        assert_eq!(
            v,
            vec![RelationViolation::Conflict {
                a: id(1),
                b: id(2),
                bin: 1
            }]
        );
        assert!(check_constraints(&six_items(), &RelationSet::default(), &sol)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn precedence_violation_is_reported() {
        let rel = RelationSet {
            precedence: fig4_precedence(),
            ..Default::default()
        };
        let sol = PackSolution {
            bins: vec![vec![id(4), id(2)]],
            unassigned: vec![id(1), id(3), id(5), id(6)],
        };
        let v = check_constraints(&six_items(), &rel, &sol).unwrap();
        assert_eq!(
            v,
            vec![RelationViolation::Precedence {
                before: id(2),
                after: id(4),
                bin: 1
            }]
        );
    }

    #[test]
    fn correspondence_dominance_and_compatibility() {
        let mut rows = BTreeMap::new();
        rows.insert(id(2), vec![3, 1, 0, 0]);
        let mut compat = BTreeMap::new();
        compat.insert((id(3), id(1)), 0);
        let rel = RelationSet {
            correspondence: Some(rows),
            compatibility: compat,
            item_dominance: vec![(id(5), id(6))],
            ..Default::default()
        };
        let sol = PackSolution {
            bins: vec![vec![id(1), id(3)], vec![id(4)], vec![id(2), id(6)]],
            unassigned: vec![id(5)],
        };
        let v = check_constraints(&six_items(), &rel, &sol).unwrap();
        assert!(v.contains(&RelationViolation::Correspondence { item: id(2), bin: 3 }));
        assert!(v.contains(&RelationViolation::Compatibility {
            a: id(1),
            b: id(3),
            bin: 1
        }));
        assert!(v.contains(&RelationViolation::Dominance {
            dominant: id(5),
            dominated: id(6)
        }));
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn dangling_ids_are_structural_errors() {
        let rel = RelationSet {
            precedence: vec![(id(1), id(99))],
            ..Default::default()
        };
        let sol = PackSolution::default();
        assert!(matches!(
            check_constraints(&six_items(), &rel, &sol),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn relation_validation() {
        let rel = RelationSet {
            precedence: vec![(id(1), id(2)), (id(2), id(1))],
            ..Default::default()
        };
        assert_eq!(rel.validate(), Err(Error::Cycle("precedence relation")));
        assert!(RelationSet {
            precedence: fig4_precedence(),
            ..Default::default()
        }
        .validate()
        .is_ok());
    }

    #[test]
    fn conflict_pack_examples() {
        let limits = ExactLimits::default();
        let inst = PackInstance::from_weights(&[q(3, 10); 3], q(1, 1)).unwrap();
        let clique = ConflictGraph::new([(id(1), id(2)), (id(1), id(3)), (id(2), id(3))]).unwrap();
        for mode in [SolveMode::Exact, SolveMode::Greedy] {
            assert_eq!(conflict_pack(&inst, &clique, mode, &limits).unwrap().bin_count(), 3);
            assert_eq!(
                conflict_pack(&inst, &ConflictGraph::default(), mode, &limits)
                    .unwrap()
                    .bin_count(),
                1
            );
        }
        assert_eq!(clique.greedy_clique_size(&[id(1), id(2), id(3)]), 3);
    }

    #[test]
    fn capacity_pairs_augment_graph() {
        let inst = PackInstance::from_weights(&[q(6, 10), q(6, 10), q(1, 10)], q(1, 1)).unwrap();
        let g = ConflictGraph::default().with_capacity_pairs(&inst);
        assert!(g.contains(id(1), id(2)));
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn inverse_pack_examples() {
        let limits = ExactLimits::default();
        let inst = PackInstance::from_weights(&[q(6, 10); 3], q(1, 1))
            .unwrap()
            .with_max_bins(1)
            .unwrap();
        let r = inverse_pack(&inst, None, SolveMode::Exact, &limits).unwrap();
        assert_eq!(r.solution.assigned_count(), 1);
        assert_eq!(r.solution.unassigned.len(), 2);
        assert_eq!(r.solution.bins, vec![vec![id(1)]]);

        let inst = PackInstance::from_weights(&[q(1, 2), q(1, 2), q(9, 10)], q(1, 1))
            .unwrap()
            .with_max_bins(1)
            .unwrap();
        let profits: BTreeMap<_, _> = [(id(1), q(1, 1)), (id(2), q(1, 1)), (id(3), q(5, 1))].into();
        for mode in [SolveMode::Exact, SolveMode::Greedy] {
            let r = inverse_pack(&inst, Some(&profits), mode, &limits).unwrap();
            assert_eq!(r.profit, q(5, 1), "{mode:?}");
            assert_eq!(r.solution.bins, vec![vec![id(3)]]);
        }
        let no_k = PackInstance::from_weights(&[q(1, 2)], q(1, 1)).unwrap();
        assert!(inverse_pack(&no_k, None, SolveMode::Exact, &limits).is_err());
    }

    #[test]
    fn order_within_bins_examples() {
        let prec = fig4_precedence();
        let sol = PackSolution {
            bins: vec![vec![id(6), id(4)], vec![id(4), id(2), id(1)]],
            unassigned: vec![],
        };
        let ordered = order_within_bins(&sol, &prec).unwrap();
        assert_eq!(ordered.bins[0], vec![id(4), id(6)]);
        assert_eq!(ordered.bins[1], vec![id(1), id(2), id(4)]);
        let plain = PackSolution {
            bins: vec![vec![id(3), id(1), id(2)]],
            unassigned: vec![],
        };
        assert_eq!(order_within_bins(&plain, &[]).unwrap(), plain);
        // free item 3 keeps its slot
        let mixed = PackSolution {
            bins: vec![vec![id(6), id(3), id(4)]],
            unassigned: vec![],
        };
        assert_eq!(
            order_within_bins(&mixed, &prec).unwrap().bins[0],
            vec![id(4), id(3), id(6)]
        );
        assert!(order_within_bins(&plain, &[(id(1), id(2)), (id(2), id(1))]).is_err());
    }
}
