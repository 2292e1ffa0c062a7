//! Instance files, reports and the bundled fixtures.
//!
//! Every instance kind shares one JSON notation: an object whose first field
//! is `"kind"`, followed by the fields of that kind. Numbers may be JSON
//! numbers (read through their shortest decimal text, so `0.55` is exactly
//! `11/20`) or strings holding a decimal or `p/q` literal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::de::value::MapAccessDeserializer;
use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::classic::{ItemId, PackInstance, PackItem, PackSolution};
use crate::coloring::{ColorCandidate, ColoredGraph, ColoredItem, Compatibility, Graph};
use crate::error::{Error, Result};
use crate::estimate::MsEstimate;
use crate::mse_packing::{ModelKind, MseItem, Relaxation};
use crate::pipelines::{ColorChangeTable, Message, PlanSettings, ProductionItem};
use crate::relational::{ConflictGraph, RelationSet};
use crate::scalar::{format_rational, Scalar};
use crate::Rational;

/// An exact rational as it appears in files.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Num(pub Rational);

impl From<Rational> for Num {
    fn from(q: Rational) -> Self {
        Num(q)
    }
}

impl From<i64> for Num {
    fn from(v: i64) -> Self {
        Num(Rational::from_integer(v))
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

/// JSON value of a rational: an integer or a decimal number when that is
/// exact after a round trip through `f64` text, otherwise a `p/q` string.
pub fn rational_value(q: Rational) -> Value {
    if q.is_integer() {
        return Value::from(*q.numer());
    }
    let text = format_rational(&q);
    match text.parse::<f64>() {
        Ok(f) if !text.contains('/') && f.to_string() == text => Value::from(f),
        _ => Value::String(text),
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        rational_value(self.0).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct NumVisitor;

        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or a numeric string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Num, E> {
                Ok(Num::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Num, E> {
                i64::try_from(v)
                    .map(Num::from)
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Num, E> {
                self.visit_str(&v.to_string())
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Num, E> {
                Rational::parse_literal(v).map(Num).map_err(E::custom)
            }
        }

        deserializer.deserialize_any(NumVisitor)
    }
}

fn positive_weight<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Num, D::Error> {
    let n = Num::deserialize(d)?;
    if !n.0.is_positive() {
        return Err(de::Error::custom("weight must be positive"));
    }
    Ok(n)
}

fn positive_u32<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<u32, D::Error> {
    let n = u32::deserialize(d)?;
    if n == 0 {
        return Err(de::Error::custom("width and length must be positive"));
    }
    Ok(n)
}

fn is_zero(v: &u32) -> bool {
    *v == 0
}

/// A request for the scale `P^{l,η}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleSpec {
    pub l: usize,
    pub eta: usize,
}

impl ScaleSpec {
    fn check(&self, e: &MsEstimate, owner: &str) -> Result<()> {
        if e.l() != self.l || e.eta() != self.eta {
            return Err(Error::DimensionMismatch(format!(
                "estimate {e} of {owner} does not match the declared scale l = {}, eta = {}",
                self.l, self.eta
            )));
        }
        Ok(())
    }
}

/// A set of estimates on a common scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSet {
    pub l: usize,
    pub eta: usize,
    pub estimates: Vec<MsEstimate>,
}

impl EstimateSet {
    pub fn checked(&self) -> Result<&[MsEstimate]> {
        let scale = ScaleSpec {
            l: self.l,
            eta: self.eta,
        };
        for (i, e) in self.estimates.iter().enumerate() {
            scale.check(e, &format!("entry {}", i + 1))?;
        }
        Ok(&self.estimates)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackItemSpec {
    pub id: u32,
    #[serde(deserialize_with = "positive_weight")]
    pub weight: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profit: Option<Num>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrespondenceRow {
    pub item: u32,
    /// Grade per bin, bin 1 first; 0 forbids the bin.
    pub grades: Vec<u32>,
}

/// Relations in file form. Matrices list rows and columns in the item
/// order of the instance; `null` marks the diagonal.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelationsSpec {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub correspondence: Vec<CorrespondenceRow>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conflicts: Vec<(u32, u32)>,
    /// Any nonzero entry, in either orientation, is a conflict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conflict_matrix: Option<Vec<Vec<Option<u32>>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub compatibility: Vec<(u32, u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compatibility_matrix: Option<Vec<Vec<Option<u32>>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub precedence: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub dominance: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bin_importance: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PackSpec {
    pub capacity: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_bins: Option<usize>,
    pub items: Vec<PackItemSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relations: Option<RelationsSpec>,
    /// A solution to check against the instance and relations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<PackSolution>,
}

impl PackSpec {
    pub fn instance(&self) -> Result<PackInstance> {
        let items = self
            .items
            .iter()
            .map(|i| PackItem {
                id: ItemId(i.id),
                weight: i.weight.0,
            })
            .collect();
        PackInstance::new(items, self.capacity.0, self.max_bins)
    }

    /// Item profits, when every item carries one.
    pub fn profits(&self) -> Result<Option<BTreeMap<ItemId, Rational>>> {
        let given = self.items.iter().filter(|i| i.profit.is_some()).count();
        if given == 0 {
            return Ok(None);
        }
        if given != self.items.len() {
            return Err(Error::InvalidInstance(
                "either every item has a profit or none does".into(),
            ));
        }
        Ok(Some(
            self.items
                .iter()
                .map(|i| (ItemId(i.id), i.profit.expect("checked above").0))
                .collect(),
        ))
    }

    fn ids(&self) -> Vec<ItemId> {
        self.items.iter().map(|i| ItemId(i.id)).collect()
    }

    /// The relation set with every id resolved against the items.
    pub fn relations(&self) -> Result<RelationSet> {
        let Some(spec) = &self.relations else {
            return Ok(RelationSet::default());
        };
        let ids = self.ids();
        let known: BTreeSet<ItemId> = ids.iter().copied().collect();
        let resolve = |id: u32| -> Result<ItemId> {
            let id = ItemId(id);
            if known.contains(&id) {
                Ok(id)
            } else {
                Err(Error::Structural(format!("relations reference unknown item {id}")))
            }
        };
        let square = |m: &[Vec<Option<u32>>], what: &str| -> Result<()> {
            if m.len() != ids.len() || m.iter().any(|row| row.len() != ids.len()) {
                return Err(Error::DimensionMismatch(format!(
                    "{what} must be {n} x {n}",
                    n = ids.len()
                )));
            }
            Ok(())
        };

        let mut rel = RelationSet::default();
        if !spec.correspondence.is_empty() {
            let mut rows = BTreeMap::new();
            for row in &spec.correspondence {
                rows.insert(resolve(row.item)?, row.grades.clone());
            }
            rel.correspondence = Some(rows);
        }
        for &(a, b) in &spec.conflicts {
            rel.add_conflict(resolve(a)?, resolve(b)?);
        }
        if let Some(m) = &spec.conflict_matrix {
            square(m, "conflict matrix")?;
            rel.conflicts.extend(RelationSet::conflicts_from_matrix(&ids, m));
        }
        for &(a, b, g) in &spec.compatibility {
            rel.compatibility.insert((resolve(a)?, resolve(b)?), g);
        }
        if let Some(m) = &spec.compatibility_matrix {
            square(m, "compatibility matrix")?;
            for (i, row) in m.iter().enumerate() {
                for (j, g) in row.iter().enumerate() {
                    if let (Some(g), true) = (g, i != j) {
                        rel.compatibility.insert((ids[i], ids[j]), *g);
                    }
                }
            }
        }
        for &(a, b) in &spec.precedence {
            rel.precedence.push((resolve(a)?, resolve(b)?));
        }
        for &(a, b) in &spec.dominance {
            rel.item_dominance.push((resolve(a)?, resolve(b)?));
        }
        rel.bin_importance = spec.bin_importance.clone();
        rel.validate()?;
        Ok(rel)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MseModel {
    Knapsack,
    MultipleChoice,
    MultipleKnapsack,
    GeneralizedAssignment,
    InverseBpp,
    ConflictInverse,
}

impl MseModel {
    pub fn name(self) -> &'static str {
        match self {
            MseModel::Knapsack => "knapsack",
            MseModel::MultipleChoice => "multiple_choice",
            MseModel::MultipleKnapsack => "multiple_knapsack",
            MseModel::GeneralizedAssignment => "generalized_assignment",
            MseModel::InverseBpp => "inverse_bpp",
            MseModel::ConflictInverse => "conflict_inverse",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelaxationSpec {
    MustAssignAll,
    AllowPartial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MseItemSpec {
    pub id: u32,
    #[serde(deserialize_with = "positive_weight")]
    pub weight: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profit: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<MsEstimate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<u32>,
    /// Per-bin estimates, bins numbered from 0.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub position_estimates: BTreeMap<usize, MsEstimate>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub position_profits: BTreeMap<usize, Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wait_age: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MseSpec {
    pub model: MseModel,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacity: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub capacities: Option<Vec<Num>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relaxation: Option<RelaxationSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conflicts: Vec<(u32, u32)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleSpec>,
    pub items: Vec<MseItemSpec>,
}

impl MseSpec {
    fn need<T: Clone>(&self, value: &Option<T>, field: &str) -> Result<T> {
        value
            .clone()
            .ok_or_else(|| Error::InvalidInstance(format!("model {} needs the field {field:?}", self.model.name())))
    }

    pub fn model(&self) -> Result<ModelKind> {
        let cap = || self.need(&self.capacity, "capacity").map(|n| n.0);
        let caps = || {
            self.need(&self.capacities, "capacities")
                .map(|v| v.iter().map(|n| n.0).collect::<Vec<_>>())
        };
        let bins = || self.need(&self.bins, "bins");
        Ok(match self.model {
            MseModel::Knapsack => ModelKind::Knapsack { capacity: cap()? },
            MseModel::MultipleChoice => ModelKind::MultipleChoice { capacity: cap()? },
            MseModel::MultipleKnapsack => ModelKind::MultipleKnapsack { capacities: caps()? },
            MseModel::GeneralizedAssignment => ModelKind::GeneralizedAssignment {
                capacities: caps()?,
                relaxation: match self.relaxation.unwrap_or(RelaxationSpec::MustAssignAll) {
                    RelaxationSpec::MustAssignAll => Relaxation::MustAssignAll,
                    RelaxationSpec::AllowPartial => Relaxation::AllowPartial,
                },
            },
            MseModel::InverseBpp => ModelKind::InverseBpp {
                bins: bins()?,
                capacity: cap()?,
            },
            MseModel::ConflictInverse => {
                let known: BTreeSet<u32> = self.items.iter().map(|i| i.id).collect();
                if let Some(&(a, b)) = self
                    .conflicts
                    .iter()
                    .find(|(a, b)| !known.contains(a) || !known.contains(b))
                {
                    return Err(Error::Structural(format!(
                        "conflict ({a},{b}) references an unknown item"
                    )));
                }
                ModelKind::ConflictInverse {
                    bins: bins()?,
                    capacity: cap()?,
                    conflicts: ConflictGraph::new(self.conflicts.iter().map(|&(a, b)| (ItemId(a), ItemId(b))))?,
                }
            }
        })
    }

    /// The items, after checking every estimate against the declared scale.
    pub fn items(&self) -> Result<Vec<MseItem>> {
        let mut out = Vec::with_capacity(self.items.len());
        for spec in &self.items {
            if let Some(scale) = &self.scale {
                let owner = format!("item {}", spec.id);
                for e in spec.estimate.iter().chain(spec.position_estimates.values()) {
                    scale.check(e, &owner)?;
                }
            }
            let mut item = MseItem::new(spec.id, spec.weight.0);
            item.profit = spec.profit.map(|p| p.0);
            item.estimate = spec.estimate.clone();
            item.group = spec.group;
            item.position_estimates = spec.position_estimates.clone();
            item.position_profits = spec.position_profits.iter().map(|(&b, p)| (b, p.0)).collect();
            item.wait_age = spec.wait_age;
            out.push(item);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateSpec {
    pub color: String,
    pub grade: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompatibilitySpec {
    pub best: u32,
    pub grades: Vec<(String, String, u32)>,
}

/// A graph with the optional data of the coloring variants. Vertices are
/// referenced by name everywhere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub candidates: BTreeMap<String, Vec<CandidateSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compatibility: Option<CompatibilitySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_levels: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub palette: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub color_weights: Vec<Vec<Num>>,
    /// Palette size for counting colorings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<usize>,
}

impl GraphSpec {
    pub fn graph(&self) -> Result<Graph> {
        let names: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        let edges: Vec<(&str, &str)> = self.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Graph::from_named_edges(&names, &edges)
    }

    pub fn colored_graph(&self) -> Result<ColoredGraph> {
        let graph = self.graph()?;
        let vertex = |name: &str| {
            graph
                .index_of(name)
                .ok_or_else(|| Error::Structural(format!("unknown vertex {name:?}")))
        };
        let mut cg = ColoredGraph::new(graph.clone());
        if let Some(parts) = &self.parts {
            let parts = parts
                .iter()
                .map(|p| p.iter().map(|v| vertex(v)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            cg.parts = Some(parts);
            cg.validate_parts()?;
        }
        if !self.candidates.is_empty() {
            if let Some(name) = self.candidates.keys().find(|k| graph.index_of(k).is_none()) {
                return Err(Error::Structural(format!(
                    "candidates given for unknown vertex {name:?}"
                )));
            }
            cg.candidates = graph
                .names()
                .iter()
                .map(|name| {
                    let list = self
                        .candidates
                        .get(name)
                        .ok_or_else(|| Error::InvalidInstance(format!("vertex {name:?} has no candidates")))?;
                    Ok(list
                        .iter()
                        .map(|c| ColorCandidate {
                            color: c.color.clone(),
                            grade: c.grade,
                        })
                        .collect())
                })
                .collect::<Result<Vec<_>>>()?;
        }
        if let Some(spec) = &self.compatibility {
            let mut compat = Compatibility::new(spec.best);
            for (a, b, g) in &spec.grades {
                compat.insert(a, b, *g)?;
            }
            cg.compatibility = compat;
        }
        if let Some(l) = self.quality_levels {
            cg.quality_levels = l;
        }
        cg.palette = self.palette.clone();
        cg.color_weights = self
            .color_weights
            .iter()
            .map(|w| w.iter().map(|n| n.0).collect())
            .collect();
        if !cg.color_weights.is_empty() && cg.color_weights.len() != cg.palette.len() {
            return Err(Error::DimensionMismatch(
                "one weight vector per palette color required".into(),
            ));
        }
        Ok(cg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoredItemSpec {
    pub id: u32,
    #[serde(deserialize_with = "positive_weight")]
    pub weight: Num,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColoredSpec {
    pub capacity: Num,
    pub items: Vec<ColoredItemSpec>,
}

impl ColoredSpec {
    pub fn items(&self) -> Vec<ColoredItem> {
        self.items
            .iter()
            .map(|i| ColoredItem {
                id: ItemId(i.id),
                weight: i.weight.0,
                color: i.color.clone(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessageSpec {
    pub id: u32,
    #[serde(deserialize_with = "positive_weight")]
    pub weight: Num,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub wait_age: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub importance: Option<Num>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub estimate: Option<MsEstimate>,
    /// Period (from 1) in which the message arrives; 1 when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arrival: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessagesSpec {
    pub budget: Num,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<ScaleSpec>,
    pub messages: Vec<MessageSpec>,
}

impl MessagesSpec {
    fn message(&self, spec: &MessageSpec) -> Result<Message> {
        if let (Some(scale), Some(e)) = (&self.scale, &spec.estimate) {
            scale.check(e, &format!("message {}", spec.id))?;
        }
        let mut m = Message::new(spec.id, spec.weight.0).with_age(spec.wait_age);
        m.importance = spec.importance.map(|n| n.0);
        m.estimate = spec.estimate.clone();
        Ok(m)
    }

    /// Every message, regardless of arrival.
    pub fn messages(&self) -> Result<Vec<Message>> {
        let ids: BTreeSet<u32> = self.messages.iter().map(|m| m.id).collect();
        if ids.len() != self.messages.len() {
            return Err(Error::InvalidInstance("duplicate message id".into()));
        }
        self.messages.iter().map(|m| self.message(m)).collect()
    }

    /// Messages grouped by arrival period.
    pub fn arrivals(&self) -> Result<Vec<Vec<Message>>> {
        let all = self.messages()?;
        let last = self.messages.iter().map(|m| m.arrival.unwrap_or(1)).max().unwrap_or(1);
        let mut out = vec![Vec::new(); last];
        for (spec, m) in self.messages.iter().zip(all) {
            let p = spec.arrival.unwrap_or(1);
            if p == 0 {
                return Err(Error::InvalidInstance(format!(
                    "message {} arrives in period 0",
                    spec.id
                )));
            }
            out[p - 1].push(m);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColorTableSpec {
    pub colors: Vec<String>,
    /// `costs[i][j]`: changing from `colors[i]` to `colors[j]`.
    pub costs: Vec<Vec<u32>>,
}

/// A production item; the trailing optional fields record a reference
/// plan to compare against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionItemSpec {
    pub id: u32,
    #[serde(deserialize_with = "positive_u32")]
    pub width: u32,
    #[serde(deserialize_with = "positive_u32")]
    pub length: u32,
    pub color: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub general_item: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub machine: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductionSpec {
    pub bar_width: u32,
    pub period_length: u32,
    pub machines: usize,
    pub color_table: ColorTableSpec,
    pub items: Vec<ProductionItemSpec>,
}

impl ProductionSpec {
    pub fn items(&self) -> Result<Vec<ProductionItem>> {
        let known: BTreeSet<&str> = self.color_table.colors.iter().map(String::as_str).collect();
        self.items
            .iter()
            .map(|i| {
                if !known.contains(i.color.as_str()) {
                    return Err(Error::Structural(format!(
                        "item {} has color {:?}, missing from the color table",
                        i.id, i.color
                    )));
                }
                Ok(ProductionItem {
                    id: ItemId(i.id),
                    width: i.width,
                    length: i.length,
                    color: i.color.clone(),
                })
            })
            .collect()
    }

    pub fn settings(&self) -> PlanSettings {
        PlanSettings {
            bar_width: self.bar_width,
            period_length: self.period_length,
            machines: self.machines,
        }
    }

    pub fn table(&self) -> Result<ColorChangeTable> {
        ColorChangeTable::new(self.color_table.colors.clone(), self.color_table.costs.clone())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum Kind {
    Scale,
    Estimates,
    Pack,
    Mse,
    Graph,
    Colored,
    Messages,
    Production,
}

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceFile {
    Scale(ScaleSpec),
    Estimates(EstimateSet),
    Pack(PackSpec),
    Mse(MseSpec),
    Graph(GraphSpec),
    Colored(ColoredSpec),
    Messages(MessagesSpec),
    Production(ProductionSpec),
}

impl InstanceFile {
    pub fn kind(&self) -> &'static str {
        match self {
            InstanceFile::Scale(_) => "scale",
            InstanceFile::Estimates(_) => "estimates",
            InstanceFile::Pack(_) => "pack",
            InstanceFile::Mse(_) => "mse",
            InstanceFile::Graph(_) => "graph",
            InstanceFile::Colored(_) => "colored",
            InstanceFile::Messages(_) => "messages",
            InstanceFile::Production(_) => "production",
        }
    }

    /// Resolves every cross-reference of the payload.
    pub fn check(&self) -> Result<()> {
        match self {
            InstanceFile::Scale(s) => crate::estimate::multiset_coefficient(s.l, s.eta).map(drop),
            InstanceFile::Estimates(s) => s.checked().map(drop),
            InstanceFile::Pack(p) => {
                let instance = p.instance()?;
                let relations = p.relations()?;
                p.profits()?;
                if let Some(sol) = &p.solution {
                    crate::relational::check_constraints(&instance, &relations, sol)?;
                }
                Ok(())
            }
            InstanceFile::Mse(m) => {
                m.model()?;
                m.items().map(drop)
            }
            InstanceFile::Graph(g) => g.colored_graph().map(drop),
            InstanceFile::Colored(_) => Ok(()),
            InstanceFile::Messages(m) => m.arrivals().map(drop),
            InstanceFile::Production(p) => {
                p.table()?;
                p.items().map(drop)
            }
        }
    }
}

impl<'de> Deserialize<'de> for InstanceFile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct FileVisitor;

        impl<'de> Visitor<'de> for FileVisitor {
            type Value = InstanceFile;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an instance object whose first field is \"kind\"")
            }

            // The tag is read first so the payload streams straight from the
            // parser and its errors keep their positions.
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> std::result::Result<InstanceFile, A::Error> {
                match map.next_key::<String>()? {
                    Some(k) if k == "kind" => {}
                    _ => return Err(de::Error::custom("the first field must be \"kind\"")),
                }
                let kind: Kind = map.next_value()?;
                let rest = MapAccessDeserializer::new(map);
                Ok(match kind {
                    Kind::Scale => InstanceFile::Scale(Deserialize::deserialize(rest)?),
                    Kind::Estimates => InstanceFile::Estimates(Deserialize::deserialize(rest)?),
                    Kind::Pack => InstanceFile::Pack(Deserialize::deserialize(rest)?),
                    Kind::Mse => InstanceFile::Mse(Deserialize::deserialize(rest)?),
                    Kind::Graph => InstanceFile::Graph(Deserialize::deserialize(rest)?),
                    Kind::Colored => InstanceFile::Colored(Deserialize::deserialize(rest)?),
                    Kind::Messages => InstanceFile::Messages(Deserialize::deserialize(rest)?),
                    Kind::Production => InstanceFile::Production(Deserialize::deserialize(rest)?),
                })
            }
        }

        deserializer.deserialize_map(FileVisitor)
    }
}

/// Parses and validates an instance. Syntax and schema errors carry the
/// line and column reported by the parser.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.check()?;
    Ok(file)
}

/// Canonical text of an instance.
pub fn emit_instance(file: &InstanceFile) -> String {
    let mut text = serde_json::to_string_pretty(file).expect("instances serialize");
    text.push('\n');
    text
}

/// SHA-256 of the compact canonical form, in hex.
pub fn digest(file: &InstanceFile) -> String {
    let compact = serde_json::to_string(file).expect("instances serialize");
    Sha256::digest(compact.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Human,
    Machine,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleVerdict {
    pub oracle: String,
    pub agrees: bool,
    pub expected: Value,
    pub observed: Value,
}

/// Outcome of one solver run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub solver: String,
    /// Digest of the canonical instance.
    pub instance: String,
    pub objectives: BTreeMap<String, Value>,
    pub metrics: BTreeMap<String, Value>,
    pub solution: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
}

impl Report {
    pub fn new(solver: impl Into<String>, file: &InstanceFile) -> Self {
        Report {
            solver: solver.into(),
            instance: digest(file),
            objectives: BTreeMap::new(),
            metrics: BTreeMap::new(),
            solution: Value::Null,
            wall_time_ms: None,
            oracle: None,
        }
    }

    pub fn objective(mut self, key: &str, value: impl Serialize) -> Self {
        self.objectives.insert(key.into(), to_value(value));
        self
    }

    pub fn metric(mut self, key: &str, value: impl Serialize) -> Self {
        self.metrics.insert(key.into(), to_value(value));
        self
    }

    pub fn with_solution(mut self, value: impl Serialize) -> Self {
        self.solution = to_value(value);
        self
    }

    pub fn with_oracle(mut self, oracle: &str, expected: impl Serialize, observed: impl Serialize) -> Self {
        let (expected, observed) = (to_value(expected), to_value(observed));
        self.oracle = Some(OracleVerdict {
            oracle: oracle.into(),
            agrees: expected == observed,
            expected,
            observed,
        });
        self
    }
}

fn to_value(value: impl Serialize) -> Value {
    serde_json::to_value(value).expect("report values serialize")
}

pub fn parse_report(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Renders a report. The machine format is pretty JSON with a fixed field
/// order; the human format prints `key: value` lines and aligned tables
/// for lists of records.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Machine => {
            let mut text = serde_json::to_string_pretty(report).expect("reports serialize");
            text.push('\n');
            text
        }
        Format::Human => {
            let mut out = String::new();
            render(&mut out, 0, "solver", &Value::String(report.solver.clone()));
            render(&mut out, 0, "instance", &Value::String(report.instance.clone()));
            for (k, v) in &report.objectives {
                render(&mut out, 0, k, v);
            }
            for (k, v) in &report.metrics {
                render(&mut out, 0, k, v);
            }
            if !report.solution.is_null() {
                render(&mut out, 0, "solution", &report.solution);
            }
            if let Some(o) = &report.oracle {
                let verdict = if o.agrees { "agrees" } else { "DISAGREES" };
                out.push_str(&format!("oracle: {} {verdict}\n", o.oracle));
                if !o.agrees {
                    render(&mut out, 2, "expected", &o.expected);
                    render(&mut out, 2, "observed", &o.observed);
                }
            }
            if let Some(ms) = report.wall_time_ms {
                out.push_str(&format!("wall_time_ms: {ms:.3}\n"));
            }
            out
        }
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Array(xs) if xs.iter().all(|x| scalar_text(x).is_some()) => {
            let parts: Vec<String> = xs.iter().filter_map(scalar_text).collect();
            format!("[{}]", parts.join(", "))
        }
        other => scalar_text(other).unwrap_or_else(|| other.to_string()),
    }
}

fn render(out: &mut String, indent: usize, key: &str, value: &Value) {
    let pad = " ".repeat(indent);
    match value {
        Value::Array(xs) if xs.is_empty() => out.push_str(&format!("{pad}{key}: []\n")),
        Value::Array(xs) if xs.iter().all(|x| scalar_text(x).is_some()) => {
            out.push_str(&format!("{pad}{key}: {}\n", cell_text(value)));
        }
        Value::Array(xs) if xs.iter().all(Value::is_object) => {
            out.push_str(&format!("{pad}{key}:\n"));
            table(out, indent + 2, xs);
        }
        Value::Array(xs) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for x in xs {
                out.push_str(&format!("{pad}  - {}\n", cell_text(x)));
            }
        }
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, v) in map {
                render(out, indent + 2, k, v);
            }
        }
        scalar => out.push_str(&format!("{pad}{key}: {}\n", cell_text(scalar))),
    }
}

fn table(out: &mut String, indent: usize, rows: &[Value]) {
    let mut columns: Vec<&str> = Vec::new();
    for row in rows {
        for k in row.as_object().expect("rows are objects").keys() {
            if !columns.contains(&k.as_str()) {
                columns.push(k);
            }
        }
    }
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|row| {
            columns
                .iter()
                .map(|c| row.get(*c).map_or(String::new(), cell_text))
                .collect()
        })
        .collect();
    let widths: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            cells
                .iter()
                .map(|r| r[i].chars().count())
                .chain([c.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |values: Vec<&str>| {
        let padded: Vec<String> = values
            .iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:<w$}", w = *w))
            .collect();
        format!("{}{}\n", " ".repeat(indent), padded.join("  ").trim_end())
    };
    out.push_str(&line(columns.clone()));
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
}

/// Instances bundled with the crate, by file stem.
pub const FIXTURES: &[(&str, &str)] = &[
    ("fig2_relations", include_str!("../fixtures/fig2_relations.json")),
    ("fig8_scale", include_str!("../fixtures/fig8_scale.json")),
    ("fig11_colored", include_str!("../fixtures/fig11_colored.json")),
    ("fig12_graph", include_str!("../fixtures/fig12_graph.json")),
    ("fig13_compat", include_str!("../fixtures/fig13_compat.json")),
    ("fig15_partition", include_str!("../fixtures/fig15_partition.json")),
    (
        "table13_production",
        include_str!("../fixtures/table13_production.json"),
    ),
];

/// Text of a bundled fixture, by full stem (`table13_production`) or by
/// the part before the first underscore (`table13`).
pub fn fixture(name: &str) -> Option<&'static str> {
    let name = name.strip_suffix(".json").unwrap_or(name);
    FIXTURES
        .iter()
        .find(|(stem, _)| *stem == name || stem.split('_').next() == Some(name))
        .map(|(_, text)| *text)
}
