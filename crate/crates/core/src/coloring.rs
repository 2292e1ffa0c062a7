//! Colored bin packing, exact vertex coloring and coloring counts,
//! weighted coloring, coloring with compatibility and partition coloring.
//!
//! Graphs hold at most 64 vertices (adjacency is a bitmask per vertex);
//! exact searches are further capped by [`ExactLimits`].

use std::collections::{BTreeMap, BTreeSet};

use crate::classic::{self, FitPolicy, ItemId, ItemOrder, PackInstance, PackItem, PackSolution};
use crate::error::{Error, Result};
use crate::estimate::{self, Dominance, MsEstimate};
use crate::limits::ExactLimits;
use crate::scalar::Scalar;
use crate::Rational;

/// Simple undirected graph with named vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    names: Vec<String>,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > 64 {
            return Err(Error::SizeLimit {
                what: "graph vertices",
                size: n,
                limit: 64,
            });
        }
        let unique: BTreeSet<&String> = names.iter().collect();
        if unique.len() != n {
            return Err(Error::InvalidInstance("duplicate vertex name".into()));
        }
        let mut adj = vec![0u64; n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Structural(format!("edge ({a},{b}) references a missing vertex")));
            }
            if a == b {
                return Err(Error::InvalidInstance(format!("self-loop on vertex {}", names[a])));
            }
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(Graph { names, adj })
    }

    /// Vertices named `1..=n`; edges given by 0-based index.
    pub fn unlabeled(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Graph::new((1..=n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn from_named_edges(names: &[&str], edges: &[(&str, &str)]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let index = |v: &str| {
            names
                .iter()
                .position(|n| n == v)
                .ok_or_else(|| Error::Structural(format!("edge references unknown vertex {v}")))
        };
        let edges = edges
            .iter()
            .map(|&(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Graph::new(names, &edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a] >> b & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges as `(a, b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.len() {
            let mut higher = self.adj[a] >> a >> 1;
            while higher != 0 {
                let off = higher.trailing_zeros() as usize;
                out.push((a, a + 1 + off));
                higher &= higher - 1;
            }
        }
        out
    }

    /// Subgraph induced by `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let names = vertices.iter().map(|&v| self.names[v].clone()).collect();
        let mut adj = vec![0u64; vertices.len()];
        for (i, &a) in vertices.iter().enumerate() {
            for (j, &b) in vertices.iter().enumerate() {
                if self.adjacent(a, b) {
                    adj[i] |= 1 << j;
                }
            }
        }
        Graph { names, adj }
    }

    /// True when `coloring` assigns one color per vertex and no edge joins
    /// equal colors.
    pub fn is_proper(&self, coloring: &[usize]) -> bool {
        coloring.len() == self.len() && self.edges().iter().all(|&(a, b)| coloring[a] != coloring[b])
    }

    fn check_limit(&self, limits: &ExactLimits) -> Result<()> {
        limits.check("graph vertices", self.len(), limits.color_vertices.min(64))
    }

    /// Vertex indices, highest degree first, ties by index.
    fn degree_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        order
    }

    fn greedy_clique(&self) -> usize {
        let mut best = usize::from(!self.is_empty());
        for start in self.degree_order() {
            let mut size = 1;
            let mut candidates = self.adj[start];
            while candidates != 0 {
                let v = candidates.trailing_zeros() as usize;
                size += 1;
                candidates &= self.adj[v];
            }
            best = best.max(size);
        }
        best
    }

    /// A proper coloring with at most `k` colors, if one exists. Colors are
    /// opened in order, so the result uses `0..used`.
    fn color_with(&self, k: usize) -> Option<Vec<usize>> {
        let order = self.degree_order();
        let mut colors = vec![usize::MAX; self.len()];
        fn descend(g: &Graph, order: &[usize], t: usize, k: usize, used: usize, colors: &mut [usize]) -> bool {
            let Some(&v) = order.get(t) else { return true };
            for c in 0..k.min(used + 1) {
                let clash = (0..g.len()).any(|u| g.adjacent(v, u) && colors[u] == c);
                if !clash {
                    colors[v] = c;
                    if descend(g, order, t + 1, k, used.max(c + 1), colors) {
                        return true;
                    }
                    colors[v] = usize::MAX;
                }
            }
            false
        }
        descend(self, &order, 0, k, 0, &mut colors).then_some(colors)
    }
}

/// Chromatic number and one optimal coloring, found by backtracking with
/// increasing color budgets. `max_colors` turns an excess into
/// [`Error::Infeasible`].
pub fn chromatic_coloring(
    graph: &Graph,
    max_colors: Option<usize>,
    limits: &ExactLimits,
) -> Result<(usize, Vec<usize>)> {
    graph.check_limit(limits)?;
    if graph.is_empty() {
        return Ok((0, Vec::new()));
    }
    let top = max_colors.unwrap_or(graph.len()).min(graph.len());
    for k in graph.greedy_clique()..=top {
        if let Some(coloring) = graph.color_with(k) {
            return Ok((k, coloring));
        }
    }
    Err(Error::Infeasible(format!(
        "graph needs more than {} colors",
        max_colors.unwrap_or(graph.len())
    )))
}

/// Number of proper colorings with colors from a fixed palette of `k`
/// labeled colors.
pub fn count_proper_colorings(graph: &Graph, k: usize, limits: &ExactLimits) -> Result<u128> {
    graph.check_limit(limits)?;
    let mut total: u128 = 1;
    for component in components(graph) {
        let count = count_component(&graph.induced(&component), k)?;
        total = total.checked_mul(count).ok_or(Error::Overflow("coloring count"))?;
    }
    Ok(total)
}

fn components(graph: &Graph) -> Vec<Vec<usize>> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    for start in 0..graph.len() {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut comp = 1u64 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = graph.adj[v] & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        seen |= comp;
        out.push((0..graph.len()).filter(|&v| comp >> v & 1 == 1).collect());
    }
    out
}

/// Inclusion-exclusion over vertex subsets `X`: proper colorings are
/// k-tuples of independent sets with total size `n` whose union is `V`, so
/// the count is `Σ_X (-1)^{n-|X|} [z^n] s_X(z)^k`, where `s_X` counts
/// independent subsets of `X` by size. Arithmetic wraps modulo 2^128, which
/// is exact because the true count is at most `k^n` and checked to fit.
fn count_component(g: &Graph, k: usize) -> Result<u128> {
    let n = g.len();
    (k as u128)
        .checked_pow(n as u32)
        .filter(|&b| b < 1 << 127)
        .ok_or(Error::Overflow("coloring count"))?;
    if n == 1 {
        return Ok(k as u128);
    }
    let size = 1usize << n;
    let mut independent = vec![true; size];
    let mut alpha = 0;
    for m in 1..size {
        let low = m.trailing_zeros() as usize;
        let rest = m & (m - 1);
        independent[m] = independent[rest] && g.adj[low] & rest as u64 == 0;
        if independent[m] {
            alpha = alpha.max(m.count_ones() as usize);
        }
    }
    let width = alpha + 1;
    // poly[m * width + s]: independent subsets of m with s vertices.
    let mut poly = vec![0u32; size * width];
    for m in 0..size {
        if independent[m] {
            poly[m * width + m.count_ones() as usize] = 1;
        }
    }
    for bit in 0..n {
        for m in 0..size {
            if m >> bit & 1 == 1 {
                let from = (m ^ 1 << bit) * width;
                for s in 0..width {
                    poly[m * width + s] += poly[from + s];
                }
            }
        }
    }
    let mut total: u128 = 0;
    for m in 0..size {
        let base: Vec<u128> = (0..=n)
            .map(|s| if s < width { poly[m * width + s] as u128 } else { 0 })
            .collect();
        let term = truncated_power(&base, k, n)[n];
        if (n - m.count_ones() as usize).is_multiple_of(2) {
            total = total.wrapping_add(term);
        } else {
            total = total.wrapping_sub(term);
        }
    }
    Ok(total)
}

fn truncated_power(base: &[u128], mut exp: usize, degree: usize) -> Vec<u128> {
    let mul = |a: &[u128], b: &[u128]| {
        let mut out = vec![0u128; degree + 1];
        for (i, &x) in a.iter().enumerate().filter(|(_, &x)| x != 0) {
            for (j, &y) in b.iter().enumerate().take(degree + 1 - i) {
                out[i + j] = out[i + j].wrapping_add(x.wrapping_mul(y));
            }
        }
        out
    };
    let mut result = vec![0u128; degree + 1];
    result[0] = 1;
    let mut square = base.to_vec();
    while exp > 0 {
        if exp & 1 == 1 {
            result = mul(&result, &square);
        }
        exp >>= 1;
        if exp > 0 {
            square = mul(&square, &square);
        }
    }
    result
}

/// A coloring drawn from a weighted palette.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedColoring<S = Rational> {
    /// Palette index per vertex.
    pub coloring: Vec<usize>,
    /// Palette indices actually used, ascending.
    pub used: Vec<usize>,
    /// Component-wise sum of the used colors' weight vectors.
    pub total: Vec<S>,
}

/// Proper colorings minimizing the total weight of used colors. Each color
/// carries a weight vector (length 1 for scalar weights); the result is the
/// Pareto front of minimal totals, one coloring per distinct total, ordered
/// by total lexicographically. Since weights are non-negative, optimal used
/// sets have exactly `χ` colors.
pub fn min_weight_coloring<S: Scalar>(
    graph: &Graph,
    weights: &[Vec<S>],
    limits: &ExactLimits,
) -> Result<Vec<WeightedColoring<S>>> {
    let dim = weights.first().map_or(0, Vec::len);
    if weights.iter().any(|w| w.len() != dim) {
        return Err(Error::DimensionMismatch("color weight vectors differ in length".into()));
    }
    if weights.iter().flatten().any(|w| *w < S::zero()) {
        return Err(Error::InvalidInstance("color weights must be non-negative".into()));
    }
    let (chi, classes) = chromatic_coloring(graph, None, limits)?;
    if chi > weights.len() {
        return Err(Error::Infeasible(format!(
            "graph needs {chi} colors but the palette has {}",
            weights.len()
        )));
    }
    let subsets = binomial(weights.len(), chi);
    if subsets > limits.configurations as u128 {
        return Err(Error::SizeLimit {
            what: "palette subsets",
            size: usize::try_from(subsets).unwrap_or(usize::MAX),
            limit: limits.configurations as usize,
        });
    }
    let mut front: Vec<(Vec<S>, Vec<usize>)> = Vec::new();
    let mut chosen: Vec<usize> = (0..chi).collect();
    loop {
        let total: Vec<S> = (0..dim)
            .map(|d| chosen.iter().fold(S::zero(), |acc, &c| acc + weights[c][d]))
            .collect();
        let dominated = front.iter().any(|(t, _)| weakly_below(t, &total));
        if !dominated {
            front.retain(|(t, _)| !weakly_below(&total, t));
            front.push((total, chosen.clone()));
        }
        if !next_combination(&mut chosen, weights.len()) {
            break;
        }
    }
    front.sort_by(|a, b| {
        a.0.iter()
            .zip(&b.0)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(front
        .into_iter()
        .map(|(total, used)| WeightedColoring {
            coloring: classes.iter().map(|&c| used[c]).collect(),
            used,
            total,
        })
        .collect())
}

/// `a ≤ b` component-wise (minimization: `a` is at least as good).
fn weakly_below<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn binomial(n: usize, r: usize) -> u128 {
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Advances to the next `r`-subset of `0..n` in lexicographic order.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let r = c.len();
    for i in (0..r).rev() {
        if c[i] < n - r + i {
            c[i] += 1;
            for j in i + 1..r {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorCandidate {
    pub color: String,
    /// Correspondence grade, 1 best.
    pub grade: u32,
}

/// Compatibility grades between colors, `0..=best`. Either orientation of
/// a pair may be given; both must then agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compatibility {
    pub best: u32,
    grades: BTreeMap<(String, String), u32>,
}

impl Compatibility {
    pub fn new(best: u32) -> Self {
        Compatibility {
            best,
            grades: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, a: &str, b: &str, grade: u32) -> Result<()> {
        if grade > self.best {
            return Err(Error::InvalidInstance(format!(
                "compatibility {grade} of ({a},{b}) exceeds the best grade {}",
                self.best
            )));
        }
        if let Some(other) = self.grades.get(&(b.to_string(), a.to_string())) {
            if *other != grade {
                return Err(Error::InvalidInstance(format!(
                    "compatibility of ({a},{b}) given as {grade} and {other}"
                )));
            }
        }
        self.grades.insert((a.to_string(), b.to_string()), grade);
        Ok(())
    }

    pub fn get(&self, a: &str, b: &str) -> Option<u32> {
        self.grades
            .get(&(a.to_string(), b.to_string()))
            .or_else(|| self.grades.get(&(b.to_string(), a.to_string())))
            .copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str, u32)> {
        self.grades.iter().map(|((a, b), g)| (a.as_str(), b.as_str(), *g))
    }
}

/// Graph with the data for the coloring variants; unused parts may be left
/// empty.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoredGraph<S = Rational> {
    pub graph: Graph,
    /// Disjoint parts covering every vertex.
    pub parts: Option<Vec<Vec<usize>>>,
    /// Color candidates per vertex.
    pub candidates: Vec<Vec<ColorCandidate>>,
    pub compatibility: Compatibility,
    /// Number of correspondence grades (levels of the quality count vector).
    pub quality_levels: usize,
    pub palette: Vec<String>,
    pub color_weights: Vec<Vec<S>>,
}

impl<S: Scalar> ColoredGraph<S> {
    pub fn new(graph: Graph) -> Self {
        ColoredGraph {
            graph,
            parts: None,
            candidates: Vec::new(),
            compatibility: Compatibility::new(4),
            quality_levels: 3,
            palette: Vec::new(),
            color_weights: Vec::new(),
        }
    }

    /// Checks that the parts, when present, cover the vertices disjointly.
    pub fn validate_parts(&self) -> Result<&[Vec<usize>]> {
        let parts = self
            .parts
            .as_deref()
            .ok_or_else(|| Error::InvalidInstance("graph has no partition".into()))?;
        let mut seen = vec![false; self.graph.len()];
        for &v in parts.iter().flatten() {
            if v >= seen.len() {
                return Err(Error::Structural(format!("part references missing vertex {v}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidInstance(format!(
                    "vertex {} lies in two parts",
                    self.graph.names[v]
                )));
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInstance(format!(
                "vertex {} lies in no part",
                self.graph.names[v]
            )));
        }
        if parts.iter().any(Vec::is_empty) {
            return Err(Error::InvalidInstance("empty part".into()));
        }
        Ok(parts)
    }
}

/// `N(S) = (w; e)`: the minimum compatibility over adjacent vertex pairs
/// (best when there are none) and the counts of chosen candidates per
/// correspondence grade.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QualityVector {
    pub w: u32,
    pub e: MsEstimate,
}

impl QualityVector {
    /// Product order: larger `w` and dominating `e`, one of them strictly.
    pub fn compare(&self, other: &QualityVector) -> Dominance {
        let e = estimate::dominates(&self.e, &other.e).unwrap_or(Dominance::Incomparable);
        match (self.w.cmp(&other.w), e) {
            (_, Dominance::Incomparable) => Dominance::Incomparable,
            (std::cmp::Ordering::Equal, e) => e,
            (std::cmp::Ordering::Greater, Dominance::Better | Dominance::Equal) => Dominance::Better,
            (std::cmp::Ordering::Less, Dominance::Worse | Dominance::Equal) => Dominance::Worse,
            _ => Dominance::Incomparable,
        }
    }
}

impl std::fmt::Display for QualityVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let counts: Vec<String> = self.e.counts().iter().map(u32::to_string).collect();
        write!(f, "({};{})", self.w, counts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatSolution {
    /// Candidate index per vertex.
    pub choice: Vec<usize>,
    pub colors: Vec<String>,
    pub quality: QualityVector,
}

/// Quality of one configuration (candidate index per vertex).
pub fn quality_of<S: Scalar>(cg: &ColoredGraph<S>, choice: &[usize]) -> Result<QualityVector> {
    let n = cg.graph.len();
    if choice.len() != n || cg.candidates.len() != n {
        return Err(Error::DimensionMismatch(
            "one candidate choice per vertex required".into(),
        ));
    }
    let mut w = cg.compatibility.best;
    for (a, b) in cg.graph.edges() {
        let (ca, cb) = (&cg.candidates[a][choice[a]], &cg.candidates[b][choice[b]]);
        let g = cg.compatibility.get(&ca.color, &cb.color).ok_or_else(|| {
            Error::InvalidInstance(format!("no compatibility for colors {} and {}", ca.color, cb.color))
        })?;
        w = w.min(g);
    }
    let levels: Vec<usize> = (0..n).map(|v| cg.candidates[v][choice[v]].grade as usize).collect();
    Ok(QualityVector {
        w,
        e: MsEstimate::from_levels(cg.quality_levels, &levels)?,
    })
}

/// All configurations with `w ≥ 1` whose quality vector no other such
/// configuration dominates, in lexicographic order of candidate choices.
pub fn compat_coloring_pareto<S: Scalar>(cg: &ColoredGraph<S>, limits: &ExactLimits) -> Result<Vec<CompatSolution>> {
    let n = cg.graph.len();
    if cg.candidates.len() != n || cg.candidates.iter().any(Vec::is_empty) {
        return Err(Error::InvalidInstance(
            "every vertex needs at least one candidate color".into(),
        ));
    }
    if let Some(c) = cg
        .candidates
        .iter()
        .flatten()
        .find(|c| c.grade == 0 || c.grade as usize > cg.quality_levels)
    {
        return Err(Error::InvalidInstance(format!(
            "grade {} of candidate {} is outside 1..={}",
            c.grade, c.color, cg.quality_levels
        )));
    }
    let product = cg
        .candidates
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .unwrap_or(u64::MAX);
    if product > limits.configurations {
        return Err(Error::SizeLimit {
            what: "color configurations",
            size: usize::try_from(product).unwrap_or(usize::MAX),
            limit: limits.configurations as usize,
        });
    }
    // grade[e][ca][cb] for edge e = (a, b) with a < b.
    let edges = cg.graph.edges();
    let grades = edges
        .iter()
        .map(|&(a, b)| {
            cg.candidates[a]
                .iter()
                .map(|ca| {
                    cg.candidates[b]
                        .iter()
                        .map(|cb| {
                            cg.compatibility.get(&ca.color, &cb.color).ok_or_else(|| {
                                Error::InvalidInstance(format!(
                                    "no compatibility for colors {} and {}",
                                    ca.color, cb.color
                                ))
                            })
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    // Edges closed by vertex v: those whose larger endpoint is v.
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(_, b)) in edges.iter().enumerate() {
        closing[b].push(e);
    }

    let mut found: Vec<(Vec<usize>, u32, Vec<u32>)> = Vec::new();
    let mut choice = vec![0usize; n];
    struct Ctx<'a> {
        cg_candidates: &'a [Vec<ColorCandidate>],
        edges: &'a [(usize, usize)],
        grades: &'a [Vec<Vec<u32>>],
        closing: &'a [Vec<usize>],
        levels: usize,
    }
    fn descend(ctx: &Ctx<'_>, v: usize, w: u32, choice: &mut [usize], found: &mut Vec<(Vec<usize>, u32, Vec<u32>)>) {
        if v == choice.len() {
            let mut counts = vec![0u32; ctx.levels];
            for (u, &c) in choice.iter().enumerate() {
                counts[ctx.cg_candidates[u][c].grade as usize - 1] += 1;
            }
            found.push((choice.to_vec(), w, counts));
            return;
        }
        for c in 0..ctx.cg_candidates[v].len() {
            choice[v] = c;
            let mut wv = w;
            for &e in &ctx.closing[v] {
                let a = ctx.edges[e].0;
                wv = wv.min(ctx.grades[e][choice[a]][c]);
            }
            if wv >= 1 {
                descend(ctx, v + 1, wv, choice, found);
            }
        }
    }
    let ctx = Ctx {
        cg_candidates: &cg.candidates,
        edges: &edges,
        grades: &grades,
        closing: &closing,
        levels: cg.quality_levels,
    };
    descend(&ctx, 0, cg.compatibility.best, &mut choice, &mut found);

    let distinct: BTreeSet<(u32, Vec<u32>)> = found.iter().map(|(_, w, c)| (*w, c.clone())).collect();
    let vectors: Vec<QualityVector> = distinct
        .into_iter()
        .map(|(w, counts)| {
            Ok(QualityVector {
                w,
                e: MsEstimate::new(counts)?,
            })
        })
        .collect::<Result<_>>()?;
    let efficient: Vec<&QualityVector> = vectors
        .iter()
        .filter(|q| !vectors.iter().any(|o| o.compare(q) == Dominance::Better))
        .collect();
    Ok(found
        .into_iter()
        .filter(|(_, w, counts)| efficient.iter().any(|q| q.w == *w && q.e.counts() == counts.as_slice()))
        .map(|(choice, w, counts)| CompatSolution {
            colors: choice
                .iter()
                .enumerate()
                .map(|(v, &c)| cg.candidates[v][c].color.clone())
                .collect(),
            choice,
            quality: QualityVector {
                w,
                e: MsEstimate::new(counts).expect("non-empty level vector"),
            },
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionColoring {
    /// Chosen vertex per part, in part order.
    pub representatives: Vec<usize>,
    /// Color per representative.
    pub coloring: Vec<usize>,
    pub colors: usize,
}

/// One vertex per part such that the induced subgraph has the smallest
/// chromatic number; the first minimizer in lexicographic order of the
/// representative vector wins.
pub fn partition_coloring<S: Scalar>(cg: &ColoredGraph<S>, limits: &ExactLimits) -> Result<PartitionColoring> {
    let parts = cg.validate_parts()?;
    cg.graph.check_limit(limits)?;
    let mut parts: Vec<Vec<usize>> = parts.to_vec();
    for p in &mut parts {
        p.sort_unstable();
    }
    let product = parts
        .iter()
        .try_fold(1u64, |acc, p| acc.checked_mul(p.len() as u64))
        .unwrap_or(u64::MAX);
    if product > limits.configurations {
        return Err(Error::SizeLimit {
            what: "representative choices",
            size: usize::try_from(product).unwrap_or(usize::MAX),
            limit: limits.configurations as usize,
        });
    }
    let mut best: Option<PartitionColoring> = None;
    let mut pick = vec![0usize; parts.len()];
    loop {
        let reps: Vec<usize> = pick.iter().zip(&parts).map(|(&i, p)| p[i]).collect();
        let sub = cg.graph.induced(&reps);
        let (chi, coloring) = chromatic_coloring(&sub, None, limits)?;
        if best.as_ref().is_none_or(|b| chi < b.colors) {
            best = Some(PartitionColoring {
                representatives: reps,
                coloring,
                colors: chi,
            });
        }
        if best.as_ref().is_some_and(|b| b.colors <= 1) {
            break;
        }
        // odometer, last part fastest
        let mut i = parts.len();
        loop {
            if i == 0 {
                return best.ok_or(Error::EmptyInput("partition coloring needs at least one part"));
            }
            i -= 1;
            pick[i] += 1;
            if pick[i] < parts[i].len() {
                break;
            }
            pick[i] = 0;
        }
    }
    Ok(best.expect("loop exits with a solution"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoredItem<S = Rational> {
    pub id: ItemId,
    pub weight: S,
    pub color: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ColoredPacking<S = Rational> {
    pub solution: PackSolution,
    /// Color of each bin of `solution`.
    pub bin_colors: Vec<String>,
    pub spans: BTreeMap<String, usize>,
    /// `bins_used / lower_bound(all items)`.
    pub alpha: S,
    /// `max_c span(c) / lower_bound(items of color c)`.
    pub beta: S,
}

/// Monochromatic-bin colored packing: each color class is packed on its
/// own (exactly when within the limits, else first fit decreasing). Colors
/// appear in order of first occurrence.
pub fn colored_pack<S: Scalar>(
    items: &[ColoredItem<S>],
    capacity: S,
    limits: &ExactLimits,
) -> Result<ColoredPacking<S>> {
    let mut classes: Vec<(String, Vec<PackItem<S>>)> = Vec::new();
    for item in items {
        let entry = PackItem {
            id: item.id,
            weight: item.weight,
        };
        match classes.iter_mut().find(|(c, _)| *c == item.color) {
            Some((_, members)) => members.push(entry),
            None => classes.push((item.color.clone(), vec![entry])),
        }
    }
    let all = PackInstance::new(
        items
            .iter()
            .map(|i| PackItem {
                id: i.id,
                weight: i.weight,
            })
            .collect(),
        capacity,
        None,
    )?;
    let mut bins = Vec::new();
    let mut bin_colors = Vec::new();
    let mut spans = BTreeMap::new();
    let mut beta = S::zero();
    for (color, members) in classes {
        let inst = PackInstance::new(members, capacity, None)?;
        let sol = if inst.len() <= limits.bpp_items {
            classic::exact_min_bins(&inst, limits)?
        } else {
            classic::fit_pack(&inst, FitPolicy::FirstFit, ItemOrder::Decreasing)
        };
        let ratio = ratio::<S>(sol.bin_count(), classic::lower_bound(&inst));
        if ratio > beta {
            beta = ratio;
        }
        spans.insert(color.clone(), sol.bin_count());
        bin_colors.extend(std::iter::repeat_n(color, sol.bin_count()));
        bins.extend(sol.bins);
    }
    let alpha = ratio::<S>(bins.len(), classic::lower_bound(&all));
    Ok(ColoredPacking {
        solution: PackSolution {
            bins,
            unassigned: Vec::new(),
        },
        bin_colors,
        spans,
        alpha,
        beta: if items.is_empty() { S::one() } else { beta },
    })
}

fn ratio<S: Scalar>(num: usize, den: usize) -> S {
    if den == 0 {
        S::one()
    } else {
        S::from_count(num) / S::from_count(den)
    }
}
