//! Brute-force searches for the order property, shattered sets and the pairing
//! index, all for the edge relation.
//!
//! Each search is a small constraint problem: variables are vertex roles,
//! constraints are "adjacent", "not adjacent" and "distinct". Search uses
//! minimum-remaining-values ordering with forward checking under a node
//! budget, optionally with randomised value order and restarts.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generators::SplitMix64;
use crate::graph::{Graph, Vertex};
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WitnessKind {
    Order,
    Shattering,
    Pairing,
}

/// Two vertex lists and the adjacency matrix they must realise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    pub k: usize,
    pub left: Vec<Vertex>,
    pub right: Vec<Vertex>,
    /// `matrix[i][j]` is the required truth of `E(left[i], right[j])`.
    pub matrix: Vec<Vec<bool>>,
}

impl Witness {
    /// Re-evaluates every matrix entry (and the distinctness the kind
    /// requires) against `g`.
    pub fn validate(&self, g: &Graph) -> bool {
        let in_range = self.left.iter().chain(&self.right).all(|&v| v < g.n());
        let shape = self.matrix.len() == self.left.len() && self.matrix.iter().all(|row| row.len() == self.right.len());
        let distinct = |vs: &[Vertex]| vs.iter().enumerate().all(|(i, v)| !vs[..i].contains(v));
        let kind_ok = match self.kind {
            WitnessKind::Order => true,
            WitnessKind::Shattering => distinct(&self.left),
            WitnessKind::Pairing => distinct(&self.right),
        };
        in_range
            && shape
            && kind_ok
            && self.left.iter().zip(&self.matrix).all(|(&a, row)| {
                self.right.iter().zip(row).all(|(&b, &want)| g.has_edge(a, b) == want)
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SearchMode {
    Exhaustive,
    Randomized { seed: u64, restarts: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_vertices: usize,
    pub max_k: usize,
    /// Node budget for the whole exhaustive search, or per restart.
    pub node_budget: u64,
    pub mode: SearchMode,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { max_vertices: 4096, max_k: 12, node_budget: 50_000_000, mode: SearchMode::Exhaustive }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub witness: Option<Witness>,
    pub mode: SearchMode,
    /// True when `witness == None` is a proof of absence (exhaustive search
    /// finished within the node budget).
    pub complete: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Rel {
    Adjacent,
    NonAdjacent,
    Distinct,
    /// Value of the first variable below that of the second.
    Less,
}

/// A binary constraint problem over values `0..universe`.
pub(crate) struct Csp<'a> {
    pub universe: usize,
    pub domains: Vec<VertexSet>,
    pub constraints: Vec<(usize, usize, Rel)>,
    pub adjacent: &'a dyn Fn(usize, usize) -> bool,
}

pub(crate) enum CspResult {
    Found(Vec<usize>),
    Absent,
    Budget,
}

impl Csp<'_> {
    fn holds(&self, rel: Rel, x: usize, y: usize) -> bool {
        match rel {
            Rel::Adjacent => (self.adjacent)(x, y),
            Rel::NonAdjacent => !(self.adjacent)(x, y),
            Rel::Distinct => x != y,
            Rel::Less => x < y,
        }
    }

    pub fn solve(&self, budget: u64, rng: Option<&mut SplitMix64>, nodes: &mut u64) -> CspResult {
        let vars = self.domains.len();
        let mut adj: Vec<Vec<(usize, Rel, bool)>> = vec![Vec::new(); vars];
        for &(x, y, rel) in &self.constraints {
            adj[x].push((y, rel, true));
            adj[y].push((x, rel, false));
        }
        let mut assignment = vec![None; vars];
        let mut search = Search { csp: self, adj, budget, nodes, rng };
        match search.go(&mut assignment, self.domains.clone()) {
            Some(true) => CspResult::Found(assignment.into_iter().map(|v| v.unwrap_or(0)).collect()),
            Some(false) => CspResult::Absent,
            None => CspResult::Budget,
        }
    }
}

struct Search<'c, 'a, 'n, 'r> {
    csp: &'c Csp<'a>,
    adj: Vec<Vec<(usize, Rel, bool)>>,
    budget: u64,
    nodes: &'n mut u64,
    rng: Option<&'r mut SplitMix64>,
}

impl Search<'_, '_, '_, '_> {
    /// `Some(true)` found, `Some(false)` exhausted, `None` over budget.
    fn go(&mut self, assignment: &mut [Option<usize>], domains: Vec<VertexSet>) -> Option<bool> {
        let Some(var) = (0..assignment.len())
            .filter(|&v| assignment[v].is_none())
            .min_by_key(|&v| domains[v].len())
        else {
            return Some(true);
        };
        let mut values = domains[var].to_vec();
        if let Some(rng) = self.rng.as_deref_mut() {
            for i in (1..values.len()).rev() {
                values.swap(i, rng.below(i + 1));
            }
        }
        for value in values {
            *self.nodes += 1;
            if *self.nodes > self.budget {
                return None;
            }
            let mut next = domains.clone();
            next[var] = VertexSet::singleton(value);
            let mut ok = true;
            for &(other, rel, forward) in &self.adj[var] {
                if let Some(w) = assignment[other] {
                    let good = if forward { self.csp.holds(rel, value, w) } else { self.csp.holds(rel, w, value) };
                    if !good {
                        ok = false;
                        break;
                    }
                    continue;
                }
                let keep: VertexSet = next[other]
                    .iter()
                    .filter(|&w| if forward { self.csp.holds(rel, value, w) } else { self.csp.holds(rel, w, value) })
                    .collect();
                if keep.is_empty() {
                    ok = false;
                    break;
                }
                next[other] = keep;
            }
            if !ok {
                continue;
            }
            assignment[var] = Some(value);
            match self.go(assignment, next)? {
                true => return Some(true),
                false => assignment[var] = None,
            }
        }
        Some(false)
    }
}

pub(crate) fn run_csp(csp: &Csp<'_>, cfg: &SearchConfig) -> (Option<Vec<usize>>, bool, u64) {
    let mut nodes = 0;
    match cfg.mode {
        SearchMode::Exhaustive => match csp.solve(cfg.node_budget, None, &mut nodes) {
            CspResult::Found(a) => (Some(a), true, nodes),
            CspResult::Absent => (None, true, nodes),
            CspResult::Budget => (None, false, nodes),
        },
        SearchMode::Randomized { seed, restarts } => {
            let mut rng = SplitMix64::new(seed);
            for _ in 0..restarts.max(1) {
                let mut run_nodes = 0;
                let res = csp.solve(cfg.node_budget, Some(&mut rng), &mut run_nodes);
                nodes += run_nodes;
                match res {
                    CspResult::Found(a) => return (Some(a), true, nodes),
                    CspResult::Absent => return (None, true, nodes),
                    CspResult::Budget => {}
                }
            }
            (None, false, nodes)
        }
    }
}

fn guard(g: &Graph, k: usize, cfg: &SearchConfig) -> Result<()> {
    if g.n() > cfg.max_vertices {
        return Err(Error::Budget { what: "witness search vertex count", limit: cfg.max_vertices });
    }
    if k > cfg.max_k {
        return Err(Error::Budget { what: "witness order", limit: cfg.max_k });
    }
    Ok(())
}

/// Searches `left` (variables `0..L`) and `right` (variables `L..`) roles
/// realising `matrix`, with extra constraints.
fn matrix_search(
    g: &Graph,
    kind: WitnessKind,
    k: usize,
    matrix: Vec<Vec<bool>>,
    extra: Vec<(usize, usize, Rel)>,
    cfg: &SearchConfig,
) -> SearchOutcome {
    let (l, r) = (matrix.len(), matrix.first().map_or(0, Vec::len));
    let mut constraints = extra;
    for (i, row) in matrix.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            constraints.push((i, l + j, if want { Rel::Adjacent } else { Rel::NonAdjacent }));
        }
    }
    let adjacent = |u: usize, v: usize| g.has_edge(u, v);
    let csp = Csp { universe: g.n(), domains: vec![VertexSet::full(g.n()); l + r], constraints, adjacent: &adjacent };
    debug_assert_eq!(csp.universe, g.n());
    let (found, complete, nodes) = run_csp(&csp, cfg);
    let witness = found.map(|a| Witness { kind, k, left: a[..l].to_vec(), right: a[l..].to_vec(), matrix });
    SearchOutcome { witness, mode: cfg.mode, complete, nodes }
}

/// Sequences `a₁…a_k`, `b₁…b_k` with `E(aᵢ, bⱼ) ⇔ i ≤ j`.
pub fn order_property_witness(g: &Graph, k: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    guard(g, k, cfg)?;
    let matrix = (0..k).map(|i| (0..k).map(|j| i <= j).collect()).collect();
    Ok(matrix_search(g, WitnessKind::Order, k, matrix, Vec::new(), cfg))
}

/// Distinct `a₁…a_k` and `b_J` for every `J ⊆ [k]` (indexed by bitmask) with
/// `E(aᵢ, b_J) ⇔ i ∈ J`.
pub fn shattering_witness(g: &Graph, k: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    guard(g, k, cfg)?;
    let matrix = (0..k).map(|i| (0..1usize << k).map(|j| j >> i & 1 == 1).collect()).collect();
    let distinct = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j, Rel::Distinct))).collect();
    Ok(matrix_search(g, WitnessKind::Shattering, k, matrix, distinct, cfg))
}

/// `a_{ij}` for pairs `i < j` of `[k]` in lexicographic order and distinct
/// `b₁…b_k` with `E(a_{ij}, b_ℓ) ⇔ ℓ ∈ {i, j}`.
pub fn pairing_index_witness(g: &Graph, k: usize, cfg: &SearchConfig) -> Result<SearchOutcome> {
    guard(g, k, cfg)?;
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let matrix: Vec<Vec<bool>> = pairs.iter().map(|&(i, j)| (0..k).map(|l| l == i || l == j).collect()).collect();
    let p = pairs.len();
    let distinct = (0..k).flat_map(|i| (i + 1..k).map(move |j| (p + i, p + j, Rel::Distinct))).collect();
    Ok(matrix_search(g, WitnessKind::Pairing, k, matrix, distinct, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, generate, Family};

    fn exhaustive() -> SearchConfig {
        SearchConfig::default()
    }

    #[test]
    fn order_property_controls() {
        let h = generate(&Family::HalfGraph { n: 4 }).unwrap();
        let w = order_property_witness(&h, 4, &exhaustive()).unwrap().witness.unwrap();
        assert!(w.validate(&h));
        let none = order_property_witness(&Graph::empty(6), 2, &exhaustive()).unwrap();
        assert!(none.witness.is_none() && none.complete);
        let k5 = order_property_witness(&clique(5), 3, &exhaustive()).unwrap();
        assert!(k5.witness.is_none() && k5.complete);
        // K5 does have the order property of length 2: a₂ = b₁.
        assert!(order_property_witness(&clique(5), 2, &exhaustive()).unwrap().witness.is_some());
    }

    #[test]
    fn shattering_controls() {
        let s = generate(&Family::ShatterGadget { k: 3 }).unwrap();
        let w = shattering_witness(&s, 3, &exhaustive()).unwrap().witness.unwrap();
        assert!(w.validate(&s));
        assert_eq!(w.right.len(), 8);
        assert!(shattering_witness(&Graph::empty(5), 1, &exhaustive()).unwrap().witness.is_none());
        let m = generate(&Family::Matching { n: 4 }).unwrap();
        assert!(shattering_witness(&m, 2, &exhaustive()).unwrap().witness.is_none());
    }

    #[test]
    fn pairing_controls() {
        let sk = generate(&Family::SubdividedClique { n: 4 }).unwrap();
        let w = pairing_index_witness(&sk, 4, &exhaustive()).unwrap().witness.unwrap();
        assert!(w.validate(&sk));
        assert!(pairing_index_witness(&Graph::empty(8), 2, &exhaustive()).unwrap().witness.is_none());
        let sf = generate(&Family::StarForest { stars: 4, leaves: 3 }).unwrap();
        let out = pairing_index_witness(&sf, 3, &exhaustive()).unwrap();
        assert!(out.witness.is_none() && out.complete);
    }

    #[test]
    fn randomized_mode_and_guards() {
        let h = generate(&Family::HalfGraph { n: 6 }).unwrap();
        let cfg = SearchConfig { mode: SearchMode::Randomized { seed: 3, restarts: 4 }, ..exhaustive() };
        let out = order_property_witness(&h, 5, &cfg).unwrap();
        assert!(out.witness.unwrap().validate(&h));
        let tight = SearchConfig { max_k: 2, ..exhaustive() };
        assert!(order_property_witness(&h, 3, &tight).is_err());
        let starved = SearchConfig { node_budget: 1, ..exhaustive() };
        let out = order_property_witness(&h, 3, &starved).unwrap();
        assert!(out.witness.is_none() && !out.complete);
    }

    #[test]
    fn tampered_witness_fails_validation() {
        let h = generate(&Family::HalfGraph { n: 3 }).unwrap();
        let mut w = order_property_witness(&h, 3, &exhaustive()).unwrap().witness.unwrap();
        w.right.swap(0, 2);
        assert!(!w.validate(&h));
    }
}
