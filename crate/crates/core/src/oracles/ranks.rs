use alloc::vec::Vec;

use crate::graph::{Graph, Vertex};

/// Truth values of `E(b, yᵢ)` along `seq`.
pub fn connection_profile(g: &Graph, b: Vertex, seq: &[Vertex]) -> Vec<bool> {
    seq.iter().map(|&y| g.has_edge(b, y)).collect()
}

/// A vertex attaining a rank, with the supporting sequence positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankWitness {
    pub rank: usize,
    pub vertex: Option<Vertex>,
    /// Alternation: start of every run of equal values (`rank + 1` entries).
    /// Exception: positions of the minority value (`rank` entries).
    pub indices: Vec<usize>,
}

/// Maximum number of sign changes of a connection profile over all vertices.
/// Ties go to the lowest vertex.
pub fn alternation_rank(g: &Graph, seq: &[Vertex]) -> RankWitness {
    let mut best = RankWitness { rank: 0, vertex: None, indices: Vec::new() };
    for b in 0..g.n() {
        let profile = connection_profile(g, b, seq);
        let starts: Vec<usize> = (0..profile.len()).filter(|&i| i == 0 || profile[i] != profile[i - 1]).collect();
        let rank = starts.len().saturating_sub(1);
        if best.vertex.is_none() || rank > best.rank {
            best = RankWitness { rank, vertex: Some(b), indices: starts };
        }
    }
    best
}

/// Maximum over vertices of `min(#true, #false)` in the connection profile.
pub fn exception_rank(g: &Graph, seq: &[Vertex]) -> RankWitness {
    let mut best = RankWitness { rank: 0, vertex: None, indices: Vec::new() };
    for b in 0..g.n() {
        let profile = connection_profile(g, b, seq);
        let trues = profile.iter().filter(|&&t| t).count();
        let minority = trues <= profile.len() - trues;
        let rank = trues.min(profile.len() - trues);
        if best.vertex.is_none() || rank > best.rank {
            let indices = (0..profile.len()).filter(|&i| profile[i] == minority).collect();
            best = RankWitness { rank, vertex: Some(b), indices };
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family};
    use alloc::vec;

    #[test]
    fn ranks_on_controls() {
        let e = Graph::empty(6);
        assert_eq!(alternation_rank(&e, &[0, 2, 4]).rank, 0);
        assert_eq!(exception_rank(&e, &[0, 2, 4]).rank, 0);

        let m = generate(&Family::Matching { n: 5 }).unwrap();
        let left: Vec<Vertex> = (0..5).map(|i| 2 * i).collect();
        let alt = alternation_rank(&m, &left);
        assert_eq!(alt.rank, 2);
        assert_eq!(alt.vertex, Some(3));
        assert_eq!(alt.indices, vec![0, 1, 2]);
        assert_eq!(exception_rank(&m, &left).rank, 1);

        let h = generate(&Family::HalfGraph { n: 6 }).unwrap();
        let a: Vec<Vertex> = (0..6).collect();
        assert_eq!(alternation_rank(&h, &a).rank, 1);
        let ex = exception_rank(&h, &a);
        assert_eq!((ex.rank, ex.vertex), (3, Some(8)));
    }
}
