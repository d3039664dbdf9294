//! Immutable simple undirected graphs, BFS distances and distance-`r`
//! independence.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::set::VertexSet;

/// Vertex identifier, `0..n`.
pub type Vertex = usize;

/// A finite simple undirected graph on the vertices `0..n`.
///
/// Adjacency is stored twice: as one bitset row per vertex (for set algebra
/// and flips) and as sorted adjacency lists (for BFS).
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    rows: Vec<VertexSet>,
    lists: Vec<Vec<Vertex>>,
}

impl Graph {
    /// Builds a graph from an edge list. Repeated edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn new<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut rows = vec![VertexSet::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            rows[u].insert(v);
            rows[v].insert(u);
        }
        Ok(Self::from_rows(rows))
    }

    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Self::from_rows(vec![VertexSet::new(); n])
    }

    /// Rows must be symmetric, irreflexive and within `0..rows.len()`.
    pub(crate) fn from_rows(rows: Vec<VertexSet>) -> Self {
        debug_assert!(rows.iter().enumerate().all(|(u, row)| {
            !row.contains(u) && row.iter().all(|v| v < rows.len() && rows[v].contains(u))
        }));
        let lists = rows.iter().map(VertexSet::to_vec).collect();
        Self { rows, lists }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn edge_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.rows.get(u).is_some_and(|row| row.contains(v))
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.lists[v]
    }

    pub fn neighborhood(&self, v: Vertex) -> &VertexSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.lists[v].len()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.lists
            .iter()
            .enumerate()
            .flat_map(|(u, vs)| vs.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub(crate) fn rows(&self) -> &[VertexSet] {
        &self.rows
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n() })
        }
    }

    /// Multi-source BFS truncated at depth `limit`. Unreached vertices (and
    /// vertices beyond the limit) get `None`.
    pub fn distances_from<I>(&self, sources: I, limit: usize) -> Vec<Option<usize>>
    where
        I: IntoIterator<Item = Vertex>,
    {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap_or(0);
            if d == limit {
                continue;
            }
            for &w in &self.lists[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// `{w : dist(v, w) ≤ r}`.
    pub fn ball(&self, v: Vertex, r: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(self.ball_unchecked(v, r))
    }

    pub(crate) fn ball_unchecked(&self, v: Vertex, r: usize) -> VertexSet {
        let mut ball = VertexSet::singleton(v);
        let mut frontier = vec![v];
        for _ in 0..r {
            let mut next = Vec::new();
            for u in frontier {
                for &w in &self.lists[u] {
                    if ball.insert(w) {
                        next.push(w);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        ball
    }

    /// Vertices whose distance to the nearest member of `sources` is exactly
    /// `i`.
    pub fn exact_distance_layer(&self, sources: &VertexSet, i: usize) -> Result<VertexSet> {
        if let Some(v) = sources.max_member() {
            self.check_vertex(v)?;
        }
        let dist = self.distances_from(sources.iter(), i);
        Ok(dist
            .iter()
            .enumerate()
            .filter(|(_, d)| **d == Some(i))
            .map(|(v, _)| v)
            .collect())
    }

    /// Finds two distinct members of `set` at distance at most `r`, scanning
    /// members in the given order. Repeated members count as distance 0.
    pub fn distance_violation(&self, set: &[Vertex], r: usize) -> Result<Option<(Vertex, Vertex)>> {
        let mut members = VertexSet::new();
        for &v in set {
            self.check_vertex(v)?;
            if !members.insert(v) {
                return Ok(Some((v, v)));
            }
        }
        for &u in set {
            let near = self.ball_unchecked(u, r);
            if let Some(v) = set.iter().copied().find(|&v| v != u && near.contains(v)) {
                return Ok(Some((u.min(v), u.max(v))));
            }
        }
        Ok(None)
    }

    /// True iff all members of `set` have pairwise distance greater than `r`.
    pub fn is_distance_r_independent(&self, set: &[Vertex], r: usize) -> Result<bool> {
        Ok(self.distance_violation(set, r)?.is_none())
    }

    /// All-pairs distances by repeated BFS.
    pub fn all_pairs_distance(&self) -> DistanceTable {
        let n = self.n();
        let mut table = DistanceTable { n, dist: vec![DistanceTable::INF; n * n] };
        for u in 0..n {
            for (v, d) in self.distances_from([u], usize::MAX).into_iter().enumerate() {
                if let Some(d) = d {
                    table.dist[u * n + v] = d as u32;
                }
            }
        }
        table
    }
}

impl core::fmt::Debug for Graph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Dense table of shortest-path distances; unreachable pairs are `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceTable {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceTable {
    const INF: u32 = u32::MAX;

    pub fn get(&self, u: Vertex, v: Vertex) -> Option<usize> {
        match self.dist[u * self.n + v] {
            Self::INF => None,
            d => Some(d as usize),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|v| (v - 1, v))).unwrap()
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert_eq!(Graph::new(3, [(0, 3)]), Err(Error::VertexOutOfRange { vertex: 3, n: 3 }));
        assert_eq!(Graph::new(3, [(1, 1)]), Err(Error::SelfLoop(1)));
        let g = Graph::new(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(g.has_edge(1, 0));
    }

    #[test]
    fn ball_on_path_and_clique() {
        let p5 = path(5);
        assert_eq!(p5.ball(2, 1).unwrap().to_vec(), vec![1, 2, 3]);
        assert_eq!(p5.ball(2, 0).unwrap().to_vec(), vec![2]);
        let k6 = Graph::new(6, (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v)))).unwrap();
        assert_eq!(k6.ball(4, 1).unwrap().len(), 6);
        assert!(p5.ball(5, 1).is_err());
    }

    #[test]
    fn exact_layers() {
        let star = Graph::new(5, (1..5).map(|v| (0, v))).unwrap();
        let layer = star.exact_distance_layer(&VertexSet::singleton(0), 1).unwrap();
        assert_eq!(layer.to_vec(), vec![1, 2, 3, 4]);
        let a: VertexSet = [1, 3].into_iter().collect();
        assert_eq!(star.exact_distance_layer(&a, 0).unwrap(), a);
        let empty = Graph::empty(4);
        assert!(empty.exact_distance_layer(&a, 1).unwrap().is_empty());
    }

    #[test]
    fn independence() {
        let empty = Graph::empty(6);
        assert!(empty.is_distance_r_independent(&[0, 1, 2, 5], 1000).unwrap());
        let k5 = Graph::new(5, (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v)))).unwrap();
        assert_eq!(k5.distance_violation(&[1, 3], 1).unwrap(), Some((1, 3)));
        assert!(k5.is_distance_r_independent(&[1, 3], 0).unwrap());
        assert_eq!(k5.distance_violation(&[2, 2], 0).unwrap(), Some((2, 2)));
    }

    #[test]
    fn small_distances() {
        let p3 = path(3);
        assert_eq!(p3.all_pairs_distance().get(0, 2), Some(2));
        let two = Graph::empty(2);
        assert_eq!(two.all_pairs_distance().get(0, 1), None);
    }
}
