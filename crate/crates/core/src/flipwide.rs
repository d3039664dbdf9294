//! The inductive flip-wideness construction.
//!
//! Starting from `B₀ = A` and no flips, level `r → r+1` runs the stable
//! sample-set construction on the surviving sequence with half radius
//! `i = ⌊r/2⌋` in the current graph `G_r`, then adds flips that cut the paths
//! of length `r + 1` between surviving centres:
//!
//! * even `r = 2i`: vertices at distance exactly `i` from the centres are
//!   coloured by `(s(x), samples adjacent to x)`, and colour classes `C₁ ≤ C₂`
//!   with `s(C₁) ∈ N(C₂)` are flipped against each other;
//! * odd `r = 2i + 1`: for each sample `s`, vertices certified by `s` at
//!   distance `≥ i + 1` are flipped against the neighbours of `s` at distance
//!   exactly `i`.
//!
//! Every level is re-verified before the next one starts.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::error::Error;
use crate::flip::{apply_flips, Flip, FlipSet};
use crate::graph::{Graph, Vertex};
use crate::indiscernibles::{ExtractionConfig, Sequence};
use crate::sampleset::{build_sample_set, DisjointFamilyInput, Mode, SampleBudget, SampleSetError};
use crate::set::VertexSet;

#[derive(Clone, Debug)]
pub struct FlipWideRequest<'g> {
    pub graph: &'g Graph,
    pub a_set: Sequence,
    pub radius: usize,
    /// Minimum size of the returned `B`.
    pub target: usize,
    pub budget: SampleBudget,
    pub extraction: ExtractionConfig,
}

impl<'g> FlipWideRequest<'g> {
    pub fn new(graph: &'g Graph, a_set: Sequence, radius: usize, target: usize) -> Self {
        Self {
            graph,
            a_set,
            radius,
            target,
            budget: SampleBudget::default(),
            extraction: ExtractionConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Base,
    Even,
    Odd,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Base => "base",
            Self::Even => "even",
            Self::Odd => "odd",
        }
    }
}

/// One step of the induction, after which `surviving` is distance-`radius`
/// independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelTrace {
    pub radius: usize,
    pub surviving: Sequence,
    pub flips_added: Vec<Flip>,
    pub parity: Parity,
    pub samples: Vec<Vertex>,
    /// Even levels only: adjacent layer vertices in different balls for which
    /// `s(x) ∈ N(y)` disagrees with `s(y) ∈ N(x)`.
    pub asymmetric_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipWideResult {
    pub b_set: Sequence,
    pub flip_set: FlipSet,
    pub trace: Vec<LevelTrace>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FlipWideError {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("level {level}: {source}")]
    SampleSet { level: usize, source: SampleSetError },
    #[error("only {} of the requested {target} vertices survived", result.b_set.len())]
    Shortfall { target: usize, result: Box<FlipWideResult> },
    #[error("internal invariant broken at level {level}: {u} and {v} are within distance {level}")]
    Invariant { level: usize, u: Vertex, v: Vertex },
}

/// A pair of `B` members at distance at most `r` in `G ⊕ F`, or a malformed
/// flip.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlipWideViolation {
    Malformed(Error),
    /// `distance` is `0` for a repeated member.
    Pair { u: Vertex, v: Vertex, distance: usize },
}

impl FlipWideResult {
    pub fn verify(&self, g: &Graph, r: usize) -> Option<FlipWideViolation> {
        verify_flip_wide(g, self.b_set.as_slice(), self.flip_set.as_slice(), r)
    }
}

/// Applies `flips` to `g` from scratch and checks by BFS that the members of
/// `b_set` are pairwise at distance greater than `r`. `None` means valid.
pub fn verify_flip_wide(g: &Graph, b_set: &[Vertex], flips: &[Flip], r: usize) -> Option<FlipWideViolation> {
    let flipped = match apply_flips(g, flips) {
        Ok(h) => h,
        Err(e) => return Some(FlipWideViolation::Malformed(e)),
    };
    match flipped.distance_violation(b_set, r) {
        Err(e) => Some(FlipWideViolation::Malformed(e)),
        Ok(None) => None,
        Ok(Some((u, v))) => {
            let distance = if u == v { 0 } else { flipped.distances_from([u], r)[v].unwrap_or(r) };
            Some(FlipWideViolation::Pair { u, v, distance })
        }
    }
}

/// Runs the construction up to `req.radius`. The full surviving set is kept at
/// every level; `req.target` is only checked at the end.
pub fn flip_widen(req: &FlipWideRequest<'_>) -> Result<FlipWideResult, FlipWideError> {
    let g = req.graph;
    for &a in req.a_set.as_slice() {
        g.check_vertex(a)?;
    }
    let mut current = g.clone();
    let mut flip_set = FlipSet::new();
    let mut survivors = req.a_set.clone();
    let mut trace = alloc::vec![LevelTrace {
        radius: 0,
        surviving: survivors.clone(),
        flips_added: Vec::new(),
        parity: Parity::Base,
        samples: Vec::new(),
        asymmetric_pairs: 0,
    }];

    for r in 0..req.radius {
        let i = r / 2;
        let input = DisjointFamilyInput { centers: survivors, half_radius: i, mode: Mode::Stable };
        let ss = build_sample_set(&current, &input, &req.budget, &req.extraction)
            .map_err(|source| FlipWideError::SampleSet { level: r + 1, source })?;
        let centers = ss.subseq;
        let dist = current.distances_from(centers.as_slice().iter().copied(), usize::MAX);
        let sample_of = |a: Vertex| ss.certificates[a].s_lt;

        let (parity, flips, asymmetric_pairs) = if centers.is_empty() {
            (if r % 2 == 0 { Parity::Even } else { Parity::Odd }, Vec::new(), 0)
        } else if r % 2 == 0 {
            let layer: Vec<Vertex> = (0..current.n()).filter(|&x| dist[x] == Some(i)).collect();
            let (flips, asym) = even_flips(&current, &ss.samples, &layer, &sample_of, &ss.certificates);
            (Parity::Even, flips, asym)
        } else {
            (Parity::Odd, odd_flips(&current, &ss.samples, &dist, i, &sample_of), 0)
        };
        let flips: Vec<Flip> = flips.into_iter().filter(|f| !f.is_trivial()).collect();

        current = apply_flips(&current, &flips)?;
        for f in &flips {
            flip_set.insert_or_cancel(f.clone());
        }
        if let Some((u, v)) = current.distance_violation(centers.as_slice(), r + 1)? {
            return Err(FlipWideError::Invariant { level: r + 1, u, v });
        }
        trace.push(LevelTrace {
            radius: r + 1,
            surviving: centers.clone(),
            flips_added: flips,
            parity,
            samples: ss.samples.clone(),
            asymmetric_pairs,
        });
        survivors = centers;
    }

    let result = FlipWideResult { b_set: survivors, flip_set, trace };
    if result.b_set.len() < req.target {
        return Err(FlipWideError::Shortfall { target: req.target, result: Box::new(result) });
    }
    Ok(result)
}

/// Colour of a layer vertex: its sample index, then the samples it is
/// adjacent to as a bitmask with sample 0 most significant.
type Colour = (usize, u64);

fn even_flips(
    g: &Graph,
    samples: &[Vertex],
    layer: &[Vertex],
    sample_of: &dyn Fn(Vertex) -> usize,
    certs: &[crate::sampleset::Certificate],
) -> (Vec<Flip>, usize) {
    let adj_mask = |x: Vertex| -> u64 {
        samples.iter().enumerate().filter(|&(_, &s)| g.has_edge(x, s)).fold(0, |acc, (p, _)| acc | 1 << p)
    };
    let big_endian = |mask: u64| mask.reverse_bits() >> (64 - samples.len().max(1));
    let colour = |x: Vertex| -> Colour { (sample_of(x), big_endian(adj_mask(x))) };
    let in_nbhd = |p: usize, c: Colour| c.1 >> (samples.len() - 1 - p) & 1 == 1;

    let mut classes: BTreeMap<Colour, VertexSet> = BTreeMap::new();
    for &x in layer {
        classes.entry(colour(x)).or_default().insert(x);
    }
    let realised: Vec<(&Colour, &VertexSet)> = classes.iter().collect();
    let mut flips = Vec::new();
    for (k, &(c1, d1)) in realised.iter().enumerate() {
        for &(c2, d2) in &realised[k..] {
            if in_nbhd(c1.0, *c2) {
                flips.push(Flip::new(d1.clone(), d2.clone()));
            }
        }
    }

    let mut asymmetric = 0;
    for &x in layer {
        for &y in g.neighbors(x) {
            if x < y && layer.binary_search(&y).is_ok() && certs[x].ex != certs[y].ex {
                let (cx, cy) = (colour(x), colour(y));
                if in_nbhd(cx.0, cy) != in_nbhd(cy.0, cx) {
                    asymmetric += 1;
                }
            }
        }
    }
    (flips, asymmetric)
}

fn odd_flips(
    g: &Graph,
    samples: &[Vertex],
    dist: &[Option<usize>],
    i: usize,
    sample_of: &dyn Fn(Vertex) -> usize,
) -> Vec<Flip> {
    samples
        .iter()
        .enumerate()
        .map(|(p, &s)| {
            let far: VertexSet =
                (0..g.n()).filter(|&a| sample_of(a) == p && dist[a].is_none_or(|d| d > i)).collect();
            let near: VertexSet = g.neighbors(s).iter().copied().filter(|&b| dist[b] == Some(i)).collect();
            Flip::new(far, near)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, generate, Family};

    fn all(n: usize) -> Sequence {
        Sequence::new((0..n).collect()).unwrap()
    }

    #[test]
    fn radius_zero_is_the_base_case() {
        let g = generate(&Family::Path { n: 6 }).unwrap();
        let res = flip_widen(&FlipWideRequest::new(&g, all(6), 0, 1)).unwrap();
        assert_eq!(res.b_set, all(6));
        assert!(res.flip_set.is_empty());
        assert_eq!(res.trace.len(), 1);
    }

    #[test]
    fn clique_needs_one_flip_per_parity() {
        let g = clique(50);
        let res = flip_widen(&FlipWideRequest::new(&g, all(50), 3, 8)).unwrap();
        assert_eq!(res.verify(&g, 3), None);
        assert!(res.b_set.len() >= 8);
        assert_eq!(res.trace.iter().map(|t| t.parity).collect::<Vec<_>>(), [
            Parity::Base,
            Parity::Even,
            Parity::Odd,
            Parity::Even
        ]);
    }

    #[test]
    fn edgeless_keeps_everything() {
        // The sample must come from outside A for nothing to be lost.
        let g = Graph::empty(12);
        let res = flip_widen(&FlipWideRequest::new(&g, all(10), 4, 10)).unwrap();
        assert_eq!(res.b_set, all(10));
        assert_eq!(res.verify(&g, 4), None);
        let res = flip_widen(&FlipWideRequest::new(&g, all(12), 4, 11)).unwrap();
        assert_eq!(res.b_set.len(), 11);
    }

    #[test]
    fn verifier_reports_pairs() {
        let k4 = clique(4);
        let full = Flip::new(VertexSet::full(4), VertexSet::full(4));
        assert_eq!(verify_flip_wide(&k4, &[0, 1, 2, 3], &[full], 100), None);
        assert_eq!(
            verify_flip_wide(&k4, &[0, 1, 2, 3], &[], 100),
            Some(FlipWideViolation::Pair { u: 0, v: 1, distance: 1 })
        );
        assert_eq!(verify_flip_wide(&k4, &[2], &[], 5), None);
        assert_eq!(verify_flip_wide(&k4, &[2, 2], &[], 5), Some(FlipWideViolation::Pair { u: 2, v: 2, distance: 0 }));
        let bad = Flip::new(VertexSet::singleton(9), VertexSet::singleton(0));
        assert!(matches!(verify_flip_wide(&k4, &[0], &[bad], 1), Some(FlipWideViolation::Malformed(_))));
    }
}
