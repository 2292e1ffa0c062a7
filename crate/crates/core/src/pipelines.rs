//! Two planning pipelines.
//!
//! Production: group items by color, bundle each color group into
//! width-bounded general items, pack general items into machine periods and
//! order each machine's work to minimize color-change cost.
//!
//! Messages: smallest-weight-first ordering, per-period selection under a
//! time budget, Pareto layering by (weight, wait age) and a multi-period
//! simulation with aging.

use std::collections::{BTreeMap, BTreeSet};

use crate::classic::ItemId;
use crate::error::{Error, Result};
use crate::estimate::MsEstimate;
use crate::limits::ExactLimits;
use crate::mse_packing::{self, MseItem, Objective};
use crate::scalar::Scalar;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductionItem {
    pub id: ItemId,
    pub width: u32,
    pub length: u32,
    pub color: String,
}

/// Directed color-change costs; `cost(a, b)` is the cost of switching from
/// color `a` to color `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorChangeTable {
    colors: Vec<String>,
    costs: Vec<Vec<u32>>,
}

impl ColorChangeTable {
    pub fn new(colors: Vec<String>, costs: Vec<Vec<u32>>) -> Result<Self> {
        if costs.len() != colors.len() || costs.iter().any(|row| row.len() != colors.len()) {
            return Err(Error::DimensionMismatch(format!(
                "color change table must be {n}x{n}",
                n = colors.len()
            )));
        }
        if colors.iter().collect::<BTreeSet<_>>().len() != colors.len() {
            return Err(Error::InvalidInstance("duplicate color in change table".into()));
        }
        Ok(ColorChangeTable { colors, costs })
    }

    pub fn colors(&self) -> &[String] {
        &self.colors
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.costs
    }

    fn index(&self, color: &str) -> Result<usize> {
        self.colors
            .iter()
            .position(|c| c == color)
            .ok_or_else(|| Error::Structural(format!("color {color} is missing from the change table")))
    }

    pub fn cost(&self, from: &str, to: &str) -> Result<u32> {
        Ok(self.costs[self.index(from)?][self.index(to)?])
    }
}

/// Color groups in order of first appearance.
pub fn group_by_color(items: &[ProductionItem]) -> Vec<(String, Vec<ProductionItem>)> {
    let mut groups: Vec<(String, Vec<ProductionItem>)> = Vec::new();
    for item in items {
        match groups.iter_mut().find(|(c, _)| *c == item.color) {
            Some((_, members)) => members.push(item.clone()),
            None => groups.push((item.color.clone(), vec![item.clone()])),
        }
    }
    groups
}

/// Items stacked end to end in one lane; all members share one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lane {
    pub items: Vec<ItemId>,
    pub width: u32,
    pub length: u32,
    member_length: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralItem {
    pub label: String,
    pub color: String,
    pub lanes: Vec<Lane>,
}

impl GeneralItem {
    pub fn width(&self) -> u32 {
        self.lanes.iter().map(|l| l.width).sum()
    }

    /// Longest lane.
    pub fn duration(&self) -> u32 {
        self.lanes.iter().map(|l| l.length).max().unwrap_or(0)
    }

    pub fn members(&self) -> Vec<ItemId> {
        let mut ids: Vec<ItemId> = self.lanes.iter().flat_map(|l| l.items.iter().copied()).collect();
        ids.sort_unstable();
        ids
    }
}

/// Bundles one color group into general items of total lane width at most
/// `bar_width`. Items go widest first (ties by id) as a new lane into the
/// first general item with room; failing that, into the first existing lane
/// of equal-length items whose widening keeps its general item within the
/// bar; failing that, into a new general item. Labels are left empty.
pub fn form_general_items(group: &[ProductionItem], bar_width: u32) -> Result<Vec<GeneralItem>> {
    if let Some(item) = group
        .iter()
        .find(|i| i.width > bar_width || i.width == 0 || i.length == 0)
    {
        return Err(Error::InvalidInstance(format!(
            "item {} has width {} and length {} for bar width {bar_width}",
            item.id, item.width, item.length
        )));
    }
    let mut order: Vec<&ProductionItem> = group.iter().collect();
    order.sort_by_key(|i| (std::cmp::Reverse(i.width), i.id));
    let mut out: Vec<GeneralItem> = Vec::new();
    for item in order {
        let lane = Lane {
            items: vec![item.id],
            width: item.width,
            length: item.length,
            member_length: item.length,
        };
        if let Some(gi) = out.iter_mut().find(|g| g.width() + item.width <= bar_width) {
            gi.lanes.push(lane);
            continue;
        }
        let merged = out.iter_mut().any(|gi| {
            let total = gi.width();
            let slot = gi
                .lanes
                .iter_mut()
                .find(|l| l.member_length == item.length && total - l.width + l.width.max(item.width) <= bar_width);
            match slot {
                Some(l) => {
                    l.items.push(item.id);
                    l.width = l.width.max(item.width);
                    l.length += item.length;
                    true
                }
                None => false,
            }
        });
        if !merged {
            out.push(GeneralItem {
                label: String::new(),
                color: item.color.clone(),
                lanes: vec![lane],
            });
        }
    }
    Ok(out)
}

/// Machine and period (both 1-based) of a general item.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub machine: usize,
    pub period: usize,
}

/// First fit decreasing by duration over machine-period bins taken period
/// by period, machine by machine. Returns one slot per input.
pub fn pack_periods(durations: &[u32], machines: usize, period_length: u32) -> Result<Vec<Slot>> {
    if machines == 0 {
        return Err(Error::InvalidInstance("at least one machine is required".into()));
    }
    if let Some(i) = durations.iter().position(|&d| d > period_length) {
        return Err(Error::Infeasible(format!(
            "general item {} lasts {} > period length {period_length}",
            i + 1,
            durations[i]
        )));
    }
    let mut order: Vec<usize> = (0..durations.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(durations[i]), i));
    let mut loads: Vec<u32> = Vec::new();
    let mut slots = vec![Slot { machine: 0, period: 0 }; durations.len()];
    for i in order {
        let bin = match loads.iter().position(|&l| l + durations[i] <= period_length) {
            Some(b) => b,
            None => {
                let fresh = loads.len().div_ceil(machines) * machines;
                loads.resize(fresh + machines, 0);
                fresh
            }
        };
        loads[bin] += durations[i];
        slots[i] = Slot {
            machine: bin % machines + 1,
            period: bin / machines + 1,
        };
    }
    Ok(slots)
}

/// Exact minimum-cost open path through `colors` (one entry per job) under
/// `table`, optionally starting from `start`. Among optimal orders the
/// lexicographically smallest index sequence is returned.
pub fn order_colors(
    colors: &[String],
    table: &ColorChangeTable,
    start: Option<&str>,
    limits: &ExactLimits,
) -> Result<(Vec<usize>, u32)> {
    let n = colors.len();
    limits.check("color sequence", n, limits.tsp_length.min(20))?;
    let idx: Vec<usize> = colors.iter().map(|c| table.index(c)).collect::<Result<_>>()?;
    let start = start.map(|s| table.index(s)).transpose()?;
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    let cost = |a: usize, b: usize| table.costs[idx[a]][idx[b]];
    let full = (1usize << n) - 1;
    // rest[mask][v]: cheapest completion after visiting `mask`, ending at v.
    let mut rest = vec![vec![u32::MAX; n]; 1 << n];
    rest[full].fill(0);
    for mask in (1..full).rev() {
        for v in (0..n).filter(|&v| mask >> v & 1 == 1) {
            let mut best = u32::MAX;
            for u in (0..n).filter(|&u| mask >> u & 1 == 0) {
                best = best.min(cost(v, u) + rest[mask | 1 << u][u]);
            }
            rest[mask][v] = best;
        }
    }
    let entry = |v: usize| start.map_or(0, |s| table.costs[s][idx[v]]);
    let total = (0..n).map(|v| entry(v) + rest[1 << v][v]).min().expect("n > 0");
    let mut order = Vec::with_capacity(n);
    let mut v = (0..n)
        .find(|&v| entry(v) + rest[1 << v][v] == total)
        .expect("optimum is attained");
    let mut mask = 1usize << v;
    order.push(v);
    while mask != full {
        let next = (0..n)
            .find(|&u| mask >> u & 1 == 0 && cost(v, u) + rest[mask | 1 << u][u] == rest[mask][v])
            .expect("optimum is attained");
        order.push(next);
        mask |= 1 << next;
        v = next;
    }
    Ok((order, total))
}

/// Change cost of running `colors` in the given order.
pub fn sequence_cost(colors: &[String], table: &ColorChangeTable, start: Option<&str>) -> Result<u32> {
    let mut total = 0;
    let mut prev = start.map(str::to_string);
    for c in colors {
        if let Some(p) = &prev {
            total += table.cost(p, c)?;
        }
        prev = Some(c.clone());
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanSettings {
    pub bar_width: u32,
    pub period_length: u32,
    pub machines: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plan {
    pub general_items: Vec<GeneralItem>,
    /// Slot of each general item.
    pub slots: Vec<Slot>,
    /// `schedule[m][p]`: general item indices run on machine `m + 1` in
    /// period `p + 1`, in execution order.
    pub schedule: Vec<Vec<Vec<usize>>>,
    pub change_cost: u32,
    /// Σ over general items of unused bar width × duration.
    pub unused_area: u64,
    /// Σ over machine-periods up to the last used period of idle time.
    pub idle_time: u64,
}

impl Plan {
    pub fn periods(&self) -> usize {
        self.slots.iter().map(|s| s.period).max().unwrap_or(0)
    }

    pub fn label_of(&self, id: ItemId) -> Option<&str> {
        self.general_items
            .iter()
            .find(|g| g.lanes.iter().any(|l| l.items.contains(&id)))
            .map(|g| g.label.as_str())
    }
}

/// Labels `I, II, ...` for `1, 2, ...`.
pub fn roman(mut n: usize) -> String {
    const TABLE: [(usize, &str); 13] = [
        (1000, "M"),
        (900, "CM"),
        (500, "D"),
        (400, "CD"),
        (100, "C"),
        (90, "XC"),
        (50, "L"),
        (40, "XL"),
        (10, "X"),
        (9, "IX"),
        (5, "V"),
        (4, "IV"),
        (1, "I"),
    ];
    let mut out = String::new();
    for &(value, glyph) in &TABLE {
        while n >= value {
            out.push_str(glyph);
            n -= value;
        }
    }
    out
}

/// The four stages composed. Each machine's periods are ordered in turn,
/// the last color of one period being the start color of the next.
pub fn plan_paper(
    items: &[ProductionItem],
    settings: &PlanSettings,
    table: &ColorChangeTable,
    limits: &ExactLimits,
) -> Result<Plan> {
    let ids: BTreeSet<ItemId> = items.iter().map(|i| i.id).collect();
    if ids.len() != items.len() {
        return Err(Error::InvalidInstance("duplicate production item id".into()));
    }
    let mut general_items = Vec::new();
    for (_, group) in group_by_color(items) {
        general_items.extend(form_general_items(&group, settings.bar_width)?);
    }
    for (k, gi) in general_items.iter_mut().enumerate() {
        gi.label = roman(k + 1);
    }
    let durations: Vec<u32> = general_items.iter().map(GeneralItem::duration).collect();
    let slots = pack_periods(&durations, settings.machines, settings.period_length)?;
    let periods = slots.iter().map(|s| s.period).max().unwrap_or(0);
    let mut schedule = vec![vec![Vec::new(); periods]; settings.machines];
    for (g, s) in slots.iter().enumerate() {
        schedule[s.machine - 1][s.period - 1].push(g);
    }
    let mut change_cost = 0;
    for machine in &mut schedule {
        let mut last: Option<String> = None;
        for bin in machine.iter_mut() {
            let colors: Vec<String> = bin.iter().map(|&g| general_items[g].color.clone()).collect();
            let (order, cost) = order_colors(&colors, table, last.as_deref(), limits)?;
            *bin = order.iter().map(|&o| bin[o]).collect();
            change_cost += cost;
            if let Some(&g) = bin.last() {
                last = Some(general_items[g].color.clone());
            }
        }
    }
    let unused_area = general_items
        .iter()
        .map(|g| u64::from(settings.bar_width - g.width()) * u64::from(g.duration()))
        .sum();
    let busy: u64 = durations.iter().map(|&d| u64::from(d)).sum();
    let idle_time = (periods * settings.machines) as u64 * u64::from(settings.period_length) - busy;
    Ok(Plan {
        general_items,
        slots,
        schedule,
        change_cost,
        unused_area,
        idle_time,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Message<S = Rational> {
    pub id: ItemId,
    /// Processing time.
    pub weight: S,
    /// Periods already spent waiting.
    pub wait_age: u32,
    pub importance: Option<S>,
    pub estimate: Option<MsEstimate>,
}

impl<S: Scalar> Message<S> {
    pub fn new(id: impl Into<ItemId>, weight: S) -> Self {
        Message {
            id: id.into(),
            weight,
            wait_age: 0,
            importance: None,
            estimate: None,
        }
    }

    pub fn with_age(mut self, age: u32) -> Self {
        self.wait_age = age;
        self
    }

    pub fn with_importance(mut self, beta: S) -> Self {
        self.importance = Some(beta);
        self
    }

    pub fn with_estimate(mut self, e: MsEstimate) -> Self {
        self.estimate = Some(e);
        self
    }
}

/// Messages in processing order with their completion times.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule<S = Rational> {
    pub order: Vec<ItemId>,
    pub weights: Vec<S>,
    /// `τ` of each position: its weight plus all earlier weights.
    pub completion: Vec<S>,
}

impl<S: Scalar> Schedule<S> {
    fn from_messages(messages: &[&Message<S>]) -> Self {
        let mut acc = S::zero();
        let completion = messages
            .iter()
            .map(|m| {
                acc = acc + m.weight;
                acc
            })
            .collect();
        Schedule {
            order: messages.iter().map(|m| m.id).collect(),
            weights: messages.iter().map(|m| m.weight).collect(),
            completion,
        }
    }

    pub fn mean_completion(&self) -> Result<S> {
        mean_completion(&self.weights)
    }
}

/// Smallest weight first, ties by id.
pub fn swf_order<S: Scalar>(messages: &[Message<S>]) -> Schedule<S> {
    let mut order: Vec<&Message<S>> = messages.iter().collect();
    order.sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.id.cmp(&b.id)));
    Schedule::from_messages(&order)
}

/// Mean completion time of jobs processed in the given order.
pub fn mean_completion<S: Scalar>(weights: &[S]) -> Result<S> {
    if weights.is_empty() {
        return Err(Error::EmptyInput("mean completion of an empty schedule"));
    }
    let mut acc = S::zero();
    let mut total = S::zero();
    for &w in weights {
        acc = acc + w;
        total = total + acc;
    }
    Ok(total / S::from_count(weights.len()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SelectObjective {
    /// Maximum number of messages.
    Count,
    /// Pareto front over (count, total wait age).
    CountAge,
    /// Maximum total importance.
    Importance,
    /// Non-dominated integrated estimate.
    Estimate,
}

/// One point of the (count, total age) front.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontPoint {
    pub ids: Vec<ItemId>,
    pub count: usize,
    pub total_age: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Selection<S = Rational> {
    /// Selected messages in smallest-weight-first order.
    pub selected: Schedule<S>,
    /// Messages left for the next period, ages already incremented.
    pub wait: Vec<Message<S>>,
    /// Full front for [`SelectObjective::CountAge`]; empty otherwise.
    pub front: Vec<FrontPoint>,
}

/// Chooses the messages processed in a period of length `budget`. For the
/// count-and-age objective the selected set is the front point with the
/// most messages (ties: larger total age, then smaller id set).
pub fn select_messages<S: Scalar>(
    messages: &[Message<S>],
    budget: S,
    objective: SelectObjective,
    limits: &ExactLimits,
) -> Result<Selection<S>> {
    if let Some(m) = messages.iter().find(|m| !m.weight.is_positive()) {
        return Err(Error::InvalidInstance(format!(
            "message {} has a non-positive weight",
            m.id
        )));
    }
    if objective != SelectObjective::Count {
        limits.check("message selection", messages.len(), limits.select_items)?;
    }
    let mut front = Vec::new();
    let chosen: BTreeSet<ItemId> = match objective {
        SelectObjective::Count => {
            let mut load = S::zero();
            let mut chosen = BTreeSet::new();
            for id in swf_order(messages).order {
                let w = messages
                    .iter()
                    .find(|m| m.id == id)
                    .expect("scheduled message exists")
                    .weight;
                if load + w > budget {
                    break;
                }
                load = load + w;
                chosen.insert(id);
            }
            chosen
        }
        SelectObjective::CountAge => {
            front = count_age_front(messages, budget);
            front
                .first()
                .map(|p| p.ids.iter().copied().collect())
                .unwrap_or_default()
        }
        SelectObjective::Importance | SelectObjective::Estimate => {
            let items = messages
                .iter()
                .map(|m| {
                    let mut item = MseItem::new(m.id, m.weight);
                    if objective == SelectObjective::Importance {
                        let beta = m
                            .importance
                            .ok_or_else(|| Error::InvalidInstance(format!("message {} has no importance", m.id)))?;
                        item = item.with_profit(beta);
                    } else {
                        let e = m
                            .estimate
                            .clone()
                            .ok_or_else(|| Error::InvalidInstance(format!("message {} has no estimate", m.id)))?;
                        item = item.with_estimate(e);
                    }
                    Ok(item)
                })
                .collect::<Result<Vec<_>>>()?;
            let obj = if objective == SelectObjective::Importance {
                Objective::Profit
            } else {
                Objective::Integrated
            };
            mse_packing::knapsack_mse(&items, budget, obj, limits)?
                .assignment
                .into_keys()
                .collect()
        }
    };
    let picked: Vec<Message<S>> = messages.iter().filter(|m| chosen.contains(&m.id)).cloned().collect();
    let wait = messages
        .iter()
        .filter(|m| !chosen.contains(&m.id))
        .map(|m| Message {
            wait_age: m.wait_age + 1,
            ..m.clone()
        })
        .collect();
    Ok(Selection {
        selected: swf_order(&picked),
        wait,
        front,
    })
}

/// Non-dominated (count, total age) pairs over all subsets fitting the
/// budget, one smallest id set per pair, most messages first.
fn count_age_front<S: Scalar>(messages: &[Message<S>], budget: S) -> Vec<FrontPoint> {
    let n = messages.len();
    let mut best: BTreeMap<(usize, u64), Vec<ItemId>> = BTreeMap::new();
    for mask in 0u64..1 << n {
        let members: Vec<&Message<S>> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| &messages[i]).collect();
        let load = members.iter().fold(S::zero(), |acc, m| acc + m.weight);
        if load > budget {
            continue;
        }
        let mut ids: Vec<ItemId> = members.iter().map(|m| m.id).collect();
        ids.sort_unstable();
        let key = (members.len(), members.iter().map(|m| u64::from(m.wait_age)).sum());
        match best.get(&key) {
            Some(existing) if *existing <= ids => {}
            _ => {
                best.insert(key, ids);
            }
        }
    }
    let keys: Vec<(usize, u64)> = best.keys().copied().collect();
    let mut front: Vec<FrontPoint> = best
        .into_iter()
        .filter(|((c, a), _)| {
            !keys
                .iter()
                .any(|&(oc, oa)| oc >= *c && oa >= *a && (oc, oa) != (*c, *a))
        })
        .map(|((count, total_age), ids)| FrontPoint { ids, count, total_age })
        .collect();
    front.sort_by(|a, b| b.count.cmp(&a.count).then(b.total_age.cmp(&a.total_age)));
    front
}

/// `a` dominates `b`: no heavier, no younger, and different in one of them.
fn message_dominates<S: Scalar>(a: &Message<S>, b: &Message<S>) -> bool {
    a.weight <= b.weight && a.wait_age >= b.wait_age && (a.weight < b.weight || a.wait_age > b.wait_age)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layer {
    /// Layer members in smallest-weight-first order.
    pub members: Vec<ItemId>,
    /// Members that received processing time.
    pub assigned: Vec<ItemId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredAssignment {
    pub layers: Vec<Layer>,
    pub selected: Vec<ItemId>,
    pub wait: Vec<ItemId>,
}

/// Peels Pareto layers under (smaller weight, larger wait age) with
/// pairwise dominance checks and assigns each layer's members in
/// smallest-weight-first order while the budget allows.
pub fn pareto_layer_assign<S: Scalar>(messages: &[Message<S>], budget: S) -> LayeredAssignment {
    let mut remaining: Vec<&Message<S>> = messages.iter().collect();
    let mut load = S::zero();
    let mut layers = Vec::new();
    let mut selected = Vec::new();
    while !remaining.is_empty() {
        let (layer, rest): (Vec<&Message<S>>, Vec<&Message<S>>) = remaining
            .iter()
            .partition(|m| !remaining.iter().any(|o| message_dominates(o, m)));
        let mut layer = layer;
        layer.sort_by(|a, b| a.weight.total_cmp(&b.weight).then(a.id.cmp(&b.id)));
        let mut assigned = Vec::new();
        for m in &layer {
            if load + m.weight <= budget {
                load = load + m.weight;
                assigned.push(m.id);
            }
        }
        selected.extend(assigned.iter().copied());
        layers.push(Layer {
            members: layer.iter().map(|m| m.id).collect(),
            assigned,
        });
        remaining = rest;
    }
    let chosen: BTreeSet<ItemId> = selected.iter().copied().collect();
    LayeredAssignment {
        layers,
        wait: messages
            .iter()
            .filter(|m| !chosen.contains(&m.id))
            .map(|m| m.id)
            .collect(),
        selected,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PeriodPolicy {
    Select(SelectObjective),
    Layers,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodRecord<S = Rational> {
    pub period: usize,
    pub processed: Schedule<S>,
    /// Waiting messages after the period, with their new ages.
    pub wait: Vec<Message<S>>,
}

/// Runs `periods` periods. Before period `p` (1-based) the messages in
/// `arrivals[p - 1]` join the queue; unprocessed messages age by one per
/// period.
pub fn simulate_periods<S: Scalar>(
    arrivals: &[Vec<Message<S>>],
    periods: usize,
    budget: S,
    policy: PeriodPolicy,
    limits: &ExactLimits,
) -> Result<Vec<PeriodRecord<S>>> {
    let mut queue: Vec<Message<S>> = Vec::new();
    let mut out = Vec::with_capacity(periods);
    for p in 0..periods {
        queue.extend(arrivals.get(p).into_iter().flatten().cloned());
        let (processed, wait) = match policy {
            PeriodPolicy::Select(objective) => {
                let s = select_messages(&queue, budget, objective, limits)?;
                (s.selected, s.wait)
            }
            PeriodPolicy::Layers => {
                let layered = pareto_layer_assign(&queue, budget);
                let chosen: BTreeSet<ItemId> = layered.selected.iter().copied().collect();
                let picked: Vec<Message<S>> = queue.iter().filter(|m| chosen.contains(&m.id)).cloned().collect();
                let wait = queue
                    .iter()
                    .filter(|m| !chosen.contains(&m.id))
                    .map(|m| Message {
                        wait_age: m.wait_age + 1,
                        ..m.clone()
                    })
                    .collect();
                (swf_order(&picked), wait)
            }
        };
        queue.clone_from(&wait);
        out.push(PeriodRecord {
            period: p + 1,
            processed,
            wait,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn pi(id: u32, width: u32, length: u32, color: &str) -> ProductionItem {
        ProductionItem {
            id: ItemId(id),
            width,
            length,
            color: color.into(),
        }
    }

    fn ids(v: &[u32]) -> Vec<ItemId> {
        v.iter().map(|&i| ItemId(i)).collect()
    }

    #[test]
    fn grouping() {
        let items = vec![pi(1, 1, 1, "a"), pi(2, 1, 1, "b"), pi(3, 1, 1, "a")];
        let g = group_by_color(&items);
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].0, "a");
        assert_eq!(g[0].1.len(), 2);
        assert_eq!(group_by_color(&items[..1]).len(), 1);
    }

    #[test]
    fn lanes_merge_equal_lengths_on_overflow() {
        let col1 = vec![
            pi(1, 8, 43, "c"),
            pi(2, 5, 30, "c"),
            pi(3, 6, 21, "c"),
            pi(4, 5, 21, "c"),
        ];
        let g = form_general_items(&col1, 20).unwrap();
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].width(), 19);
        assert_eq!(g[0].lanes.len(), 3);
        assert!(g[0].lanes.iter().any(|l| l.items == ids(&[3, 4]) && l.length == 42));

        let col3 = vec![
            pi(18, 10, 24, "c"),
            pi(19, 9, 23, "c"),
            pi(20, 6, 24, "c"),
            pi(21, 5, 23, "c"),
            pi(22, 7, 22, "c"),
        ];
        let g = form_general_items(&col3, 20).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g[0].members(), ids(&[18, 19]));
        assert_eq!(g[1].members(), ids(&[20, 21, 22]));
        assert_eq!((g[0].width(), g[1].width()), (19, 18));

        let one = form_general_items(&col3[..1], 20).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].lanes.len(), 1);
        assert!(form_general_items(&[pi(1, 21, 1, "c")], 20).is_err());
    }

    #[test]
    fn period_packing() {
        let slots = pack_periods(&[50, 50, 50], 3, 50).unwrap();
        assert!(slots.iter().all(|s| s.period == 1));
        let machines: BTreeSet<usize> = slots.iter().map(|s| s.machine).collect();
        assert_eq!(machines.len(), 3);
        let slots = pack_periods(&[30, 30], 1, 50).unwrap();
        assert_eq!((slots[0].period, slots[1].period), (1, 2));
        assert!(matches!(pack_periods(&[51], 1, 50), Err(Error::Infeasible(_))));
    }

    fn table() -> ColorChangeTable {
        let colors = (1..=3).map(|i| format!("c{i}")).collect();
        ColorChangeTable::new(colors, vec![vec![0, 5, 1], vec![1, 0, 5], vec![5, 1, 0]]).unwrap()
    }

    #[test]
    fn color_ordering() {
        let lim = ExactLimits::default();
        let same = vec!["c1".to_string(); 3];
        assert_eq!(order_colors(&same, &table(), None, &lim).unwrap(), (vec![0, 1, 2], 0));
        let mixed: Vec<String> = ["c2", "c1", "c3"].iter().map(|s| s.to_string()).collect();
        let (order, cost) = order_colors(&mixed, &table(), None, &lim).unwrap();
        assert_eq!(cost, 2);
        assert_eq!(order, vec![0, 1, 2]);
        let reordered: Vec<String> = order.iter().map(|&i| mixed[i].clone()).collect();
        assert_eq!(sequence_cost(&reordered, &table(), None).unwrap(), 2);
        let (order, cost) = order_colors(&mixed, &table(), Some("c3"), &lim).unwrap();
        assert_eq!((order, cost), (vec![2, 0, 1], 2));
        assert!(order_colors(&["zz".to_string()], &table(), None, &lim).is_err());
    }

    #[test]
    fn empty_plan() {
        let settings = PlanSettings {
            bar_width: 20,
            period_length: 50,
            machines: 3,
        };
        let plan = plan_paper(&[], &settings, &table(), &ExactLimits::default()).unwrap();
        assert!(plan.general_items.is_empty());
        assert_eq!(plan.change_cost, 0);
        assert_eq!(roman(8), "VIII");
        assert_eq!(roman(14), "XIV");
    }

    #[test]
    fn swf_examples() {
        let msgs = vec![
            Message::new(1, q(3, 1)),
            Message::new(2, q(1, 1)),
            Message::new(3, q(2, 1)),
        ];
        let s = swf_order(&msgs);
        assert_eq!(s.order, ids(&[2, 3, 1]));
        assert_eq!(s.mean_completion().unwrap(), q(10, 3));
        assert_eq!(mean_completion(&[q(3, 1), q(2, 1), q(1, 1)]).unwrap(), q(14, 3));
        assert_eq!(mean_completion(&[q(1, 1)]).unwrap(), q(1, 1));
        assert!(mean_completion::<Rational>(&[]).is_err());
        let equal = vec![Message::new(2, q(1, 1)), Message::new(1, q(1, 1))];
        assert_eq!(swf_order(&equal).order, ids(&[1, 2]));
    }

    #[test]
    fn selection_examples() {
        let lim = ExactLimits::default();
        let msgs: Vec<_> = (1..=3u32).map(|i| Message::new(i, q(3, 5))).collect();
        let s = select_messages(&msgs, q(1, 1), SelectObjective::Count, &lim).unwrap();
        assert_eq!(s.selected.order, ids(&[1]));
        assert_eq!(s.wait.len(), 2);
        assert!(s.wait.iter().all(|m| m.wait_age == 1));
        let s = select_messages(&msgs, q(2, 1), SelectObjective::Count, &lim).unwrap();
        assert_eq!(s.selected.order.len(), 3);
        assert!(s.wait.is_empty());

        let aged = vec![
            Message::new(1, q(1, 2)).with_age(0),
            Message::new(2, q(1, 2)).with_age(0),
            Message::new(3, q(9, 10)).with_age(7),
        ];
        let s = select_messages(&aged, q(1, 1), SelectObjective::CountAge, &lim).unwrap();
        assert_eq!(s.front.len(), 2);
        assert_eq!(s.front[0].ids, ids(&[1, 2]));
        assert_eq!(s.front[1].ids, ids(&[3]));
        assert_eq!(s.selected.order, ids(&[1, 2]));

        let imp = vec![
            Message::new(1, q(1, 2)).with_importance(q(1, 1)),
            Message::new(2, q(1, 2)).with_importance(q(1, 1)),
            Message::new(3, q(9, 10)).with_importance(q(3, 1)),
        ];
        let s = select_messages(&imp, q(1, 1), SelectObjective::Importance, &lim).unwrap();
        assert_eq!(s.selected.order, ids(&[3]));
        assert!(select_messages(&msgs, q(1, 1), SelectObjective::Importance, &lim).is_err());
    }

    #[test]
    fn layer_examples() {
        let msgs = vec![
            Message::new(1, q(1, 1)).with_age(0),
            Message::new(2, q(2, 1)).with_age(5),
            Message::new(3, q(3, 1)).with_age(0),
        ];
        let r = pareto_layer_assign(&msgs, q(3, 1));
        assert_eq!(r.layers.len(), 2);
        assert_eq!(r.layers[0].members, ids(&[1, 2]));
        assert_eq!(r.layers[1].members, ids(&[3]));
        assert_eq!(r.selected, ids(&[1, 2]));
        assert_eq!(r.wait, ids(&[3]));

        let equal: Vec<_> = (1..=4u32).map(|i| Message::new(i, q(1, 1)).with_age(2)).collect();
        assert_eq!(pareto_layer_assign(&equal, q(1, 1)).layers.len(), 1);
        let one = pareto_layer_assign(&[Message::new(1, q(1, 1))], q(1, 1));
        assert_eq!(one.selected, ids(&[1]));
    }

    #[test]
    fn simulation_ages_waiting_messages() {
        let msgs: Vec<_> = (1..=6u32).map(|i| Message::new(i, q(1, 1))).collect();
        let recs = simulate_periods(
            &[msgs],
            5,
            q(1, 1),
            PeriodPolicy::Select(SelectObjective::Count),
            &ExactLimits::default(),
        )
        .unwrap();
        assert_eq!(recs.len(), 5);
        for (p, rec) in recs.iter().enumerate() {
            assert_eq!(rec.processed.order, ids(&[p as u32 + 1]));
            assert!(rec.wait.iter().all(|m| m.wait_age == p as u32 + 1));
        }
    }
}
