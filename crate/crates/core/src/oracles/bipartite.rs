use alloc::vec;
use alloc::vec::Vec;

use super::witness::{run_csp, Csp, Rel, SearchConfig};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::set::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CanonicalKind {
    /// `aᵢ ~ bⱼ ⇔ i = j`.
    Matching,
    /// `aᵢ ~ bⱼ ⇔ i ≠ j`.
    CoMatching,
    /// `aᵢ ~ bⱼ ⇔ i ≤ j`.
    Ladder,
}

impl CanonicalKind {
    pub fn adjacent(self, i: usize, j: usize) -> bool {
        match self {
            Self::Matching => i == j,
            Self::CoMatching => i != j,
            Self::Ladder => i <= j,
        }
    }
}

/// Index pairs `(i, j)` into the left and right sequences; the `s`-th pair
/// plays the role of `(a_s, b_s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalPattern {
    pub kind: CanonicalKind,
    pub pairs: Vec<(usize, usize)>,
}

/// Finds an induced matching, co-matching or ladder of order `order` (tried in
/// that order) between `left` and `right` by exhaustive search. Left vertices
/// with identical neighbourhoods in `right` are rejected as twins. `Ok(None)`
/// means no pattern exists; running out of nodes is a budget error.
pub fn bipartite_canonical_pattern(
    left: &[Vertex],
    right: &[Vertex],
    adjacent: &dyn Fn(Vertex, Vertex) -> bool,
    order: usize,
    cfg: &SearchConfig,
) -> Result<Option<CanonicalPattern>> {
    let rows: Vec<Vec<bool>> = left.iter().map(|&a| right.iter().map(|&b| adjacent(a, b)).collect()).collect();
    for i in 0..rows.len() {
        if let Some(j) = (i + 1..rows.len()).find(|&j| rows[i] == rows[j]) {
            return Err(Error::Twins(left[i], left[j]));
        }
    }
    if order > cfg.max_k.max(left.len()) {
        return Err(Error::Budget { what: "pattern order", limit: cfg.max_k.max(left.len()) });
    }
    if order == 0 {
        return Ok(Some(CanonicalPattern { kind: CanonicalKind::Matching, pairs: Vec::new() }));
    }
    let (nl, nr) = (left.len(), right.len());
    // Values 0..nl are left indices, nl..nl+nr right indices.
    let rel = |x: usize, y: usize| -> bool {
        match (x < nl, y < nl) {
            (true, false) => rows[x][y - nl],
            (false, true) => rows[y][x - nl],
            _ => false,
        }
    };
    let left_dom: VertexSet = (0..nl).collect();
    let right_dom: VertexSet = (nl..nl + nr).collect();
    for kind in [CanonicalKind::Matching, CanonicalKind::CoMatching, CanonicalKind::Ladder] {
        let mut domains = vec![left_dom.clone(); order];
        domains.extend(vec![right_dom.clone(); order]);
        let mut constraints = Vec::new();
        for s in 0..order {
            for t in 0..order {
                let want = if kind.adjacent(s, t) { Rel::Adjacent } else { Rel::NonAdjacent };
                constraints.push((s, order + t, want));
            }
            for t in s + 1..order {
                // Matchings and co-matchings are symmetric under reordering.
                let left_rel = if kind == CanonicalKind::Ladder { Rel::Distinct } else { Rel::Less };
                constraints.push((s, t, left_rel));
                constraints.push((order + s, order + t, Rel::Distinct));
            }
        }
        let csp = Csp { universe: nl + nr, domains, constraints, adjacent: &rel };
        let (found, complete, _) = run_csp(&csp, cfg);
        if let Some(a) = found {
            let pairs = (0..order).map(|s| (a[s], a[order + s] - nl)).collect();
            return Ok(Some(CanonicalPattern { kind, pairs }));
        }
        if !complete {
            return Err(Error::Budget { what: "bipartite pattern search nodes", limit: cfg.node_budget as usize });
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(p: &CanonicalPattern, adj: &dyn Fn(usize, usize) -> bool) {
        for (s, &(i, _)) in p.pairs.iter().enumerate() {
            for (t, &(_, j)) in p.pairs.iter().enumerate() {
                assert_eq!(adj(i, j), p.kind.adjacent(s, t));
            }
        }
    }

    #[test]
    fn canonical_families() {
        let idx: Vec<usize> = (0..6).collect();
        let cfg = SearchConfig::default();

        let matching = |i: usize, j: usize| i == j;
        let p = bipartite_canonical_pattern(&idx, &idx, &matching, 5, &cfg).unwrap().unwrap();
        assert_eq!(p.kind, CanonicalKind::Matching);
        check(&p, &matching);

        let ladder = |i: usize, j: usize| i <= j;
        let p = bipartite_canonical_pattern(&idx, &idx, &ladder, 6, &cfg).unwrap().unwrap();
        assert_eq!(p.kind, CanonicalKind::Ladder);
        check(&p, &ladder);

        let co = |i: usize, j: usize| i != j;
        let p = bipartite_canonical_pattern(&idx, &idx, &co, 5, &cfg).unwrap().unwrap();
        assert_eq!(p.kind, CanonicalKind::CoMatching);
        check(&p, &co);
    }

    #[test]
    fn twins_and_absence() {
        let cfg = SearchConfig::default();
        let same = |_: usize, j: usize| j == 0;
        assert_eq!(bipartite_canonical_pattern(&[0, 1], &[0, 1], &same, 1, &cfg), Err(Error::Twins(0, 1)));
        let matching = |i: usize, j: usize| i == j;
        assert_eq!(bipartite_canonical_pattern(&[0, 1, 2], &[0, 1, 2], &matching, 4, &cfg), Ok(None));
    }
}
