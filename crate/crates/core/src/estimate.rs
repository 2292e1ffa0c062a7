//! Interval multiset estimates over an ordinal scale `[1, l]`.
//!
//! An estimate places `eta` elements on the levels `1..=l` (level 1 is the
//! best). It is stored in position form: `counts[i]` is the number of
//! elements on level `i + 1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MsEstimate {
    counts: Vec<u32>,
}

/// Vector-like proximity `(δ⁻, δ⁺)`: one-level improvement moves and
/// one-level degradation moves.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Proximity {
    pub delta_minus: u64,
    pub delta_plus: u64,
}

impl Proximity {
    /// `|δ| = δ⁻ + δ⁺`.
    pub fn magnitude(&self) -> u64 {
        self.delta_minus + self.delta_plus
    }

    pub fn swapped(&self) -> Proximity {
        Proximity {
            delta_minus: self.delta_plus,
            delta_plus: self.delta_minus,
        }
    }
}

/// Outcome of comparing two estimates in the dominance poset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Dominance {
    Better,
    Worse,
    Equal,
    Incomparable,
}

impl Dominance {
    pub fn reversed(self) -> Dominance {
        match self {
            Dominance::Better => Dominance::Worse,
            Dominance::Worse => Dominance::Better,
            other => other,
        }
    }
}

impl MsEstimate {
    /// Builds an estimate from its position form. `l = counts.len()` must be
    /// at least 1.
    pub fn new(counts: Vec<u32>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidScale { l: 0, eta: 0 });
        }
        Ok(MsEstimate { counts })
    }

    /// The empty estimate (`eta = 0`) on a scale of `l` levels; the
    /// integration of nothing.
    pub fn empty(l: usize) -> Result<Self> {
        MsEstimate::new(vec![0; l])
    }

    /// Builds an estimate from a list of 1-based levels.
    pub fn from_levels(l: usize, levels: &[usize]) -> Result<Self> {
        let mut counts = vec![0u32; l];
        for &lvl in levels {
            if lvl == 0 || lvl > l {
                return Err(Error::DimensionMismatch(format!("level {lvl} outside scale [1,{l}]")));
            }
            counts[lvl - 1] += 1;
        }
        MsEstimate::new(counts)
    }

    pub fn l(&self) -> usize {
        self.counts.len()
    }

    pub fn eta(&self) -> usize {
        self.counts.iter().map(|&c| c as usize).sum()
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// True when the occupied levels form one contiguous range.
    pub fn is_interval(&self) -> bool {
        let first = self.counts.iter().position(|&c| c > 0);
        let last = self.counts.iter().rposition(|&c| c > 0);
        match (first, last) {
            (Some(a), Some(b)) => self.counts[a..=b].iter().all(|&c| c > 0),
            _ => true,
        }
    }

    /// Element levels (1-based) in ascending order.
    pub fn elements(&self) -> Vec<usize> {
        self.counts
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c as usize))
            .collect()
    }

    /// Number of elements on levels `1..=level`, for each level.
    fn cumulative(&self) -> Vec<u64> {
        self.counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c as u64;
                Some(*acc)
            })
            .collect()
    }

    /// Sum of element levels; smaller is better.
    pub fn level_sum(&self) -> u64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as u64 + 1) * c as u64)
            .sum()
    }

    /// Worst occupied level (0 for the empty estimate).
    pub fn worst_level(&self) -> usize {
        self.counts.iter().rposition(|&c| c > 0).map_or(0, |p| p + 1)
    }

    fn check_scale(&self, other: &MsEstimate) -> Result<()> {
        if self.l() != other.l() {
            return Err(Error::DimensionMismatch(format!(
                "scale sizes differ: {} vs {}",
                self.l(),
                other.l()
            )));
        }
        Ok(())
    }

    fn check_same_shape(&self, other: &MsEstimate) -> Result<()> {
        self.check_scale(other)?;
        if self.eta() != other.eta() {
            return Err(Error::DimensionMismatch(format!(
                "cardinalities differ: {} vs {}",
                self.eta(),
                other.eta()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for MsEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}:[", self.l(), self.eta())?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for MsEstimate {
    type Err = Error;

    /// Parses `"l,eta:[c1,...,cl]"`; the `l,eta:` prefix is optional and,
    /// when present, must agree with the counts.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("malformed estimate {s:?}"));
        let (header, body) = match s.split_once(':') {
            Some((h, b)) => (Some(h), b.trim()),
            None => (None, s),
        };
        let inner = body
            .strip_prefix('[')
            .and_then(|b| b.strip_suffix(']'))
            .or_else(|| body.strip_prefix('(').and_then(|b| b.strip_suffix(')')))
            .ok_or_else(bad)?;
        let counts = inner
            .split(',')
            .map(|t| t.trim().parse::<u32>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        let e = MsEstimate::new(counts)?;
        if let Some(header) = header {
            let (l, eta) = header.split_once(',').ok_or_else(bad)?;
            let l: usize = l.trim().parse().map_err(|_| bad())?;
            let eta: usize = eta.trim().parse().map_err(|_| bad())?;
            if l != e.l() || eta != e.eta() {
                return Err(Error::DimensionMismatch(format!(
                    "estimate {s:?} declares l={l}, eta={eta} but has l={}, eta={}",
                    e.l(),
                    e.eta()
                )));
            }
        }
        Ok(e)
    }
}

impl serde::Serialize for MsEstimate {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for MsEstimate {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiset coefficient `l(l+1)…(l+eta−1)/eta!`: the number of multisets of
/// cardinality `eta` over `l` levels.
pub fn multiset_coefficient(l: usize, eta: usize) -> Result<u64> {
    if l == 0 || eta == 0 {
        return Err(Error::InvalidScale { l, eta });
    }
    // After step i the accumulator is C(l-1+i+1, i+1), always integral.
    let mut acc: u128 = 1;
    for i in 0..eta as u128 {
        acc = acc
            .checked_mul(l as u128 + i)
            .ok_or(Error::Overflow("multiset coefficient"))?
            / (i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::Overflow("multiset coefficient"))
}

/// All multisets of cardinality `eta` over `l` levels, interval or not, in
/// lexicographically descending position form.
pub fn enumerate_multisets(l: usize, eta: usize) -> Result<Vec<MsEstimate>> {
    if l == 0 {
        return Err(Error::InvalidScale { l, eta });
    }
    fn rec(pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MsEstimate>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(MsEstimate { counts: cur.clone() });
            return;
        }
        for c in (0..=left).rev() {
            cur[pos] = c;
            rec(pos + 1, left - c, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, eta as u32, &mut vec![0; l], &mut out);
    Ok(out)
}

/// Total order used for deterministic tie-breaking: larger cardinality
/// first, then smaller level sum, then better worst level, then
/// lexicographically larger position form. Restricted to one `(l, eta)` it
/// is a linear extension of the dominance poset.
pub fn canonical_cmp(a: &MsEstimate, b: &MsEstimate) -> Ordering {
    b.eta()
        .cmp(&a.eta())
        .then(a.level_sum().cmp(&b.level_sum()))
        .then(a.worst_level().cmp(&b.worst_level()))
        .then(b.counts.cmp(&a.counts))
}

/// The assessment scale: every interval estimate of cardinality `eta` over
/// `[1, l]`, best-first in canonical order.
pub fn enumerate_scale(l: usize, eta: usize) -> Result<Vec<MsEstimate>> {
    if l == 0 || eta == 0 {
        return Err(Error::InvalidScale { l, eta });
    }
    multiset_coefficient(l, eta)?;
    let mut scale: Vec<MsEstimate> = enumerate_multisets(l, eta)?
        .into_iter()
        .filter(MsEstimate::is_interval)
        .collect();
    scale.sort_by(canonical_cmp);
    Ok(scale)
}

/// Component-wise sum of position forms (multiset union ⊎).
pub fn integrate(estimates: &[MsEstimate]) -> Result<MsEstimate> {
    let (first, rest) = estimates
        .split_first()
        .ok_or(Error::EmptyInput("integrate needs at least one estimate"))?;
    let mut counts = first.counts.clone();
    for e in rest {
        first.check_scale(e)?;
        for (acc, &c) in counts.iter_mut().zip(&e.counts) {
            *acc = acc.checked_add(c).ok_or(Error::Overflow("integration"))?;
        }
    }
    MsEstimate::new(counts)
}

/// Minimal one-level moves turning `from` into `to`, split into
/// improvements (`δ⁻`) and degradations (`δ⁺`).
pub fn proximity(from: &MsEstimate, to: &MsEstimate) -> Result<Proximity> {
    from.check_same_shape(to)?;
    let mut p = Proximity::default();
    // Walk both sorted element sequences via the cumulative counts; the
    // gap between prefix counts at each level boundary is the number of
    // elements that must cross that boundary.
    let (ca, cb) = (from.cumulative(), to.cumulative());
    for (a, b) in ca.iter().zip(&cb).take(from.l().saturating_sub(1)) {
        if a > b {
            p.delta_plus += a - b;
        } else {
            p.delta_minus += b - a;
        }
    }
    Ok(p)
}

/// Dominance of `a` over `b` for estimates of equal `(l, eta)`: `a` is
/// better when its sorted elements are component-wise no worse and at least
/// one is strictly better.
pub fn dominates(a: &MsEstimate, b: &MsEstimate) -> Result<Dominance> {
    a.check_same_shape(b)?;
    Ok(cumulative_order(a, b))
}

/// Dominance extended to estimates of different cardinality on one scale:
/// `a` is at least as good as `b` when, for every level, `a` has at least as
/// many elements at that level or better. For equal cardinality this is
/// exactly [`dominates`]. More elements never hurt, so the empty estimate is
/// dominated by every non-empty one.
pub fn dominates_accumulated(a: &MsEstimate, b: &MsEstimate) -> Result<Dominance> {
    a.check_scale(b)?;
    Ok(cumulative_order(a, b))
}

fn cumulative_order(a: &MsEstimate, b: &MsEstimate) -> Dominance {
    let (ca, cb) = (a.cumulative(), b.cumulative());
    let mut a_ahead = false;
    let mut b_ahead = false;
    for (x, y) in ca.iter().zip(&cb) {
        match x.cmp(y) {
            Ordering::Greater => a_ahead = true,
            Ordering::Less => b_ahead = true,
            Ordering::Equal => {}
        }
    }
    match (a_ahead, b_ahead) {
        (false, false) => Dominance::Equal,
        (true, false) => Dominance::Better,
        (false, true) => Dominance::Worse,
        (true, true) => Dominance::Incomparable,
    }
}

fn check_common_shape(set: &[MsEstimate]) -> Result<&MsEstimate> {
    let first = set
        .first()
        .ok_or(Error::EmptyInput("median of an empty estimate set"))?;
    for e in &set[1..] {
        first.check_same_shape(e)?;
    }
    Ok(first)
}

/// Sum of `|δ(candidate, e)|` over the set.
pub fn total_distance(candidate: &MsEstimate, set: &[MsEstimate]) -> Result<u64> {
    set.iter().map(|e| proximity(candidate, e).map(|p| p.magnitude())).sum()
}

/// Generalized median: the scale estimate with minimal total `|δ|` to the
/// set. Ties go to the first minimizer in canonical scale order. Returns the
/// median and its total distance.
pub fn generalized_median_with_cost(set: &[MsEstimate]) -> Result<(MsEstimate, u64)> {
    let first = check_common_shape(set)?;
    let scale = enumerate_scale(first.l(), first.eta())?;
    argmin_distance(scale, set)
}

pub fn generalized_median(set: &[MsEstimate]) -> Result<MsEstimate> {
    generalized_median_with_cost(set).map(|(m, _)| m)
}

/// Set median: the member of the set with minimal total `|δ|` to the set;
/// ties go to the first in input order.
pub fn set_median_with_cost(set: &[MsEstimate]) -> Result<(MsEstimate, u64)> {
    check_common_shape(set)?;
    argmin_distance(set.iter().cloned(), set)
}

pub fn set_median(set: &[MsEstimate]) -> Result<MsEstimate> {
    set_median_with_cost(set).map(|(m, _)| m)
}

fn argmin_distance(candidates: impl IntoIterator<Item = MsEstimate>, set: &[MsEstimate]) -> Result<(MsEstimate, u64)> {
    let mut best: Option<(MsEstimate, u64)> = None;
    for cand in candidates {
        let d = total_distance(&cand, set)?;
        if best.as_ref().is_none_or(|(_, bd)| d < *bd) {
            best = Some((cand, d));
        }
    }
    best.ok_or(Error::EmptyInput("no median candidates"))
}
