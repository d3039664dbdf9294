//! Deterministic graph families used as positive and negative controls.
//!
//! Vertex numbering is part of the contract (fixtures are compared edge list
//! by edge list):
//!
//! * `matching(n)`: edges `{2i, 2i+1}`.
//! * `half_graph(n)`: `a_i = i`, `b_j = n + j`, `a_i ~ b_j ⇔ i ≤ j`.
//! * `star_forest(s, l)`: star `k` has centre `k(l+1)` followed by its `l`
//!   leaves.
//! * `grid(w, h)`: vertex `(x, y)` is `y·w + x`.
//! * `subdivided_clique(n)`: principal vertices `0..n`, then one subdivision
//!   vertex per pair `i < j` in lexicographic order.
//! * `shatter_gadget(k)`: left `0..k`, right vertex `k + J` for every bitmask
//!   `J < 2^k`, adjacent to left `i` iff bit `i` of `J` is set.
//! * `random_bounded_degree(n, d, seed)`: `n·d` proposals; each draws
//!   `u = x₁ mod n`, `v = x₂ mod n` from [`SplitMix64`] and keeps `uv` iff
//!   `u ≠ v`, the edge is new and both degrees are below `d`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::set::VertexSet;

/// Largest `k` accepted by the shatter gadget (`2^k` right vertices).
pub const MAX_SHATTER_K: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Clique { n: usize },
    Edgeless { n: usize },
    Matching { n: usize },
    HalfGraph { n: usize },
    StarForest { stars: usize, leaves: usize },
    Path { n: usize },
    Grid { width: usize, height: usize },
    SubdividedClique { n: usize },
    ShatterGadget { k: usize },
    RandomBoundedDegree { n: usize, max_degree: usize, seed: u64 },
}

/// SplitMix64 (Steele, Lea, Flood 2014): `state += 0x9E3779B97F4A7C15`, then
/// the output mix with multipliers `0xBF58476D1CE4E5B9`, `0x94D049BB133111EB`
/// and shifts 30, 27, 31.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// `next_u64() mod bound`; `bound` must be positive.
    pub fn below(&mut self, bound: usize) -> usize {
        (self.next_u64() % bound as u64) as usize
    }
}

pub fn generate(family: &Family) -> Result<Graph> {
    use Family::*;
    match *family {
        Clique { n } => Ok(clique(n)),
        Edgeless { n } => Ok(Graph::empty(n)),
        Matching { n } => Graph::new(2 * n, (0..n).map(|i| (2 * i, 2 * i + 1))),
        HalfGraph { n } => Graph::new(2 * n, (0..n).flat_map(|i| (i..n).map(move |j| (i, n + j)))),
        StarForest { stars, leaves } => {
            let edges = (0..stars).flat_map(|s| {
                let c = s * (leaves + 1);
                (1..=leaves).map(move |l| (c, c + l))
            });
            Graph::new(stars * (leaves + 1), edges)
        }
        Path { n } => Graph::new(n, (1..n).map(|v| (v - 1, v))),
        Grid { width, height } => {
            let id = |x: usize, y: usize| y * width + x;
            let mut edges = Vec::new();
            for y in 0..height {
                for x in 0..width {
                    if x + 1 < width {
                        edges.push((id(x, y), id(x + 1, y)));
                    }
                    if y + 1 < height {
                        edges.push((id(x, y), id(x, y + 1)));
                    }
                }
            }
            Graph::new(width * height, edges)
        }
        SubdividedClique { n } => {
            let mut edges = Vec::new();
            let mut next = n;
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((i, next));
                    edges.push((j, next));
                    next += 1;
                }
            }
            Graph::new(next, edges)
        }
        ShatterGadget { k } => {
            if k > MAX_SHATTER_K {
                return Err(Error::Budget { what: "shatter gadget order", limit: MAX_SHATTER_K });
            }
            let right = 1usize << k;
            let edges = (0..right)
                .flat_map(|j| (0..k).filter(move |i| j >> i & 1 == 1).map(move |i| (i, k + j)));
            Graph::new(k + right, edges)
        }
        RandomBoundedDegree { n, max_degree, seed } => {
            if n == 0 {
                return Err(Error::InvalidParameter("random graph needs n ≥ 1"));
            }
            let mut rng = SplitMix64::new(seed);
            let mut degree = vec![0usize; n];
            let mut rows = vec![VertexSet::new(); n];
            for _ in 0..n * max_degree {
                let u = rng.below(n);
                let v = rng.below(n);
                if u != v && !rows[u].contains(v) && degree[u] < max_degree && degree[v] < max_degree {
                    rows[u].insert(v);
                    rows[v].insert(u);
                    degree[u] += 1;
                    degree[v] += 1;
                }
            }
            Ok(Graph::from_rows(rows))
        }
    }
}

pub fn clique(n: usize) -> Graph {
    let rows = (0..n)
        .map(|v| {
            let mut row = VertexSet::full(n);
            row.remove(v);
            row
        })
        .collect();
    Graph::from_rows(rows)
}

/// Toggles every pair of distinct vertices.
pub fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let rows = (0..n)
        .map(|v| {
            let mut row = VertexSet::full(n);
            row.difference_with(g.neighborhood(v));
            row.remove(v);
            row
        })
        .collect();
    Graph::from_rows(rows)
}

/// Connects every pair at distance at most `p` (`p ≥ 1`).
pub fn power(g: &Graph, p: usize) -> Result<Graph> {
    if p == 0 {
        return Err(Error::InvalidParameter("graph power needs p ≥ 1"));
    }
    let rows = (0..g.n())
        .map(|v| {
            let mut row = g.ball_unchecked(v, p);
            row.remove(v);
            row
        })
        .collect();
    Ok(Graph::from_rows(rows))
}
