//! Sample sets for sequences of centres with pairwise disjoint balls.
//!
//! Given centres `c₁ … c_m` whose radius-`i` balls are disjoint, the
//! construction alternates indiscernible extraction (over the `eq` formulas of
//! the current samples) with a termination test: every vertex `a` of the graph
//! must split the surviving centres at one exceptional position `ex(a)` such
//! that `a` behaves like sample `s<(a)` on every ball before it and like
//! `s>(a)` on every ball after it. "Behaves like" is φ-equivalence over the
//! ball with φ the edge relation.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::error::Error;
use crate::formulas::{eq_atoms, EvalContext};
use crate::graph::{Graph, Vertex};
use crate::indiscernibles::{extract_indiscernible, Delta, ExtractError, ExtractionConfig, Sequence};
use crate::set::VertexSet;

/// Samples are tracked in 64-bit masks.
pub const MAX_SAMPLES: usize = 64;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `s<(a) = s>(a)` for every vertex.
    #[default]
    Stable,
    /// Two homogeneous halves around `ex(a)`.
    Nip,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointFamilyInput {
    pub centers: Sequence,
    pub half_radius: usize,
    pub mode: Mode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleBudget {
    pub max_samples: usize,
    pub max_rounds: usize,
    pub min_surviving_length: usize,
}

impl Default for SampleBudget {
    fn default() -> Self {
        Self { max_samples: 8, max_rounds: 8, min_surviving_length: 1 }
    }
}

/// Exceptional index into the surviving sequence and sample indices for the
/// balls before (`s_lt`) and after (`s_gt`) it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Certificate {
    pub ex: usize,
    pub s_lt: usize,
    pub s_gt: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleSetResult {
    pub samples: Vec<Vertex>,
    pub subseq: Sequence,
    /// One certificate per vertex of the graph; empty when `subseq` is empty.
    pub certificates: Vec<Certificate>,
    pub rounds: usize,
}

/// State of the construction when it gave up.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialState {
    pub samples: Vec<Vertex>,
    pub survivors: Sequence,
    /// Vertices without a valid decomposition in the last round.
    pub undecomposed: Vec<Vertex>,
    pub rounds: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SampleSetError {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("balls around centres {first} and {second} intersect")]
    OverlappingBalls { first: Vertex, second: Vertex },
    #[error("{what} budget of {limit} exhausted; class likely not monadically NIP at these budgets")]
    Budget { what: &'static str, limit: usize, partial: Box<PartialState> },
    #[error("no vertex is inequivalent to all samples on all but two balls; class likely not monadically NIP")]
    NoCandidate { partial: Box<PartialState> },
    #[error("vertex {vertex} has no single-sample decomposition; input is not stable-like")]
    StableMode { vertex: Vertex, partial: Box<PartialState> },
}

impl SampleSetError {
    pub fn partial(&self) -> Option<&PartialState> {
        match self {
            Self::Budget { partial, .. } | Self::NoCandidate { partial } | Self::StableMode { partial, .. } => {
                Some(partial)
            }
            _ => None,
        }
    }
}

/// `a` and `b` have the same neighbours inside `ball` and are both in or both
/// outside it.
pub fn phi_equivalent_over(g: &Graph, a: Vertex, b: Vertex, ball: &VertexSet) -> bool {
    ball.contains(a) == ball.contains(b) && g.neighborhood(a).agrees_within(g.neighborhood(b), ball)
}

/// Bit `p` is set iff `a` is equivalent to `samples[p]` over `ball`.
fn equivalence_mask(g: &Graph, samples: &[Vertex], ball: &VertexSet, a: Vertex) -> u64 {
    samples
        .iter()
        .enumerate()
        .filter(|&(_, &s)| phi_equivalent_over(g, a, s, ball))
        .fold(0, |acc, (p, _)| acc | 1 << p)
}

/// Canonical certificate for `a`: if one sample matches on every ball, `ex` is
/// the last position and `s_lt = s_gt` is the lowest such sample. Otherwise the
/// smallest valid `ex` with the lowest matching samples. In stable mode the two
/// samples must coincide. `None` if no split exists (always for no samples or
/// no balls).
pub fn decompose_exceptional(
    g: &Graph,
    samples: &[Vertex],
    balls: &[VertexSet],
    a: Vertex,
    mode: Mode,
) -> Option<Certificate> {
    let m = balls.len();
    if samples.is_empty() || m == 0 || samples.len() > MAX_SAMPLES {
        return None;
    }
    let masks: Vec<u64> = balls.iter().map(|b| equivalence_mask(g, samples, b, a)).collect();
    let all = masks.iter().fold(u64::MAX, |acc, &x| acc & x);
    if all != 0 {
        let p = all.trailing_zeros() as usize;
        return Some(Certificate { ex: m - 1, s_lt: p, s_gt: p });
    }
    let full = if samples.len() == 64 { u64::MAX } else { (1u64 << samples.len()) - 1 };
    // suffix[e] = AND of masks after position e.
    let mut suffix = vec![full; m];
    for e in (0..m - 1).rev() {
        suffix[e] = suffix[e + 1] & masks[e + 1];
    }
    let mut prefix = full;
    for e in 0..m {
        let (lt, gt) = (prefix, suffix[e]);
        let found = match mode {
            Mode::Nip if lt != 0 && gt != 0 => Some((lt.trailing_zeros(), gt.trailing_zeros())),
            Mode::Stable if lt & gt != 0 => {
                let p = (lt & gt).trailing_zeros();
                Some((p, p))
            }
            _ => None,
        };
        if let Some((p, q)) = found {
            return Some(Certificate { ex: e, s_lt: p as usize, s_gt: q as usize });
        }
        prefix &= masks[e];
        if prefix == 0 && mode == Mode::Stable {
            // A stable split needs a sample matching every earlier ball.
            return None;
        }
    }
    None
}

fn balls_of(g: &Graph, centers: &[Vertex], radius: usize) -> Vec<VertexSet> {
    centers.iter().map(|&c| g.ball_unchecked(c, radius)).collect()
}

fn check_disjoint(g: &Graph, input: &DisjointFamilyInput) -> Result<Vec<VertexSet>, SampleSetError> {
    for &c in input.centers.as_slice() {
        g.check_vertex(c)?;
    }
    let balls = balls_of(g, input.centers.as_slice(), input.half_radius);
    let mut union = VertexSet::new();
    for (j, ball) in balls.iter().enumerate() {
        if !union.is_disjoint(ball) {
            let first = (0..j).find(|&i| !balls[i].is_disjoint(ball)).unwrap_or(j);
            let seq = input.centers.as_slice();
            return Err(SampleSetError::OverlappingBalls { first: seq[first], second: seq[j] });
        }
        union.union_with(ball);
    }
    Ok(balls)
}

/// Runs the sample-set construction. Extraction uses the `eq` formulas of the
/// current samples with patterns up to `cfg.max_pattern_length`; the
/// configured target length is ignored in favour of
/// `budget.min_surviving_length`.
pub fn build_sample_set(
    g: &Graph,
    input: &DisjointFamilyInput,
    budget: &SampleBudget,
    cfg: &ExtractionConfig,
) -> Result<SampleSetResult, SampleSetError> {
    check_disjoint(g, input)?;
    if input.centers.is_empty() {
        return Ok(SampleSetResult { samples: Vec::new(), subseq: Sequence::default(), certificates: Vec::new(), rounds: 0 });
    }
    let max_samples = budget.max_samples.min(MAX_SAMPLES);
    let extract_cfg = ExtractionConfig { target_length: 1, ..*cfg };
    let mut survivors = input.centers.clone();
    let mut samples: Vec<Vertex> = Vec::new();
    let mut rounds = 0;
    loop {
        let partial = |survivors: &Sequence, samples: &[Vertex], undecomposed: Vec<Vertex>, rounds: usize| {
            Box::new(PartialState { samples: samples.to_vec(), survivors: survivors.clone(), undecomposed, rounds })
        };
        if rounds >= budget.max_rounds {
            return Err(SampleSetError::Budget {
                what: "round",
                limit: budget.max_rounds,
                partial: partial(&survivors, &samples, Vec::new(), rounds),
            });
        }
        rounds += 1;
        if !samples.is_empty() {
            let ctx = EvalContext::new(g, samples.clone(), input.half_radius)?;
            let delta = Delta::type_patterns(eq_atoms(samples.len()), cfg.max_pattern_length);
            survivors = match extract_indiscernible(&ctx, &delta, &survivors, &extract_cfg) {
                Ok(seq) => seq,
                Err(ExtractError::Shortfall { achieved, .. }) => achieved,
                Err(ExtractError::Input(e)) => return Err(e.into()),
            };
        }
        if survivors.len() < budget.min_surviving_length.max(1) {
            return Err(SampleSetError::Budget {
                what: "surviving length",
                limit: budget.min_surviving_length,
                partial: partial(&survivors, &samples, Vec::new(), rounds),
            });
        }
        let balls = balls_of(g, survivors.as_slice(), input.half_radius);

        let mut certificates = Vec::with_capacity(g.n());
        let mut undecomposed = Vec::new();
        let mut unstable = None;
        for a in 0..g.n() {
            match decompose_exceptional(g, &samples, &balls, a, Mode::Nip) {
                None => undecomposed.push(a),
                Some(nip) if input.mode == Mode::Stable && nip.s_lt != nip.s_gt => {
                    match decompose_exceptional(g, &samples, &balls, a, Mode::Stable) {
                        Some(c) => certificates.push(c),
                        None => {
                            unstable.get_or_insert(a);
                            undecomposed.push(a);
                        }
                    }
                }
                Some(c) => certificates.push(c),
            }
        }
        if undecomposed.is_empty() {
            return Ok(SampleSetResult { samples, subseq: survivors, certificates, rounds });
        }
        if samples.len() >= max_samples {
            return Err(SampleSetError::Budget {
                what: "sample",
                limit: max_samples,
                partial: partial(&survivors, &samples, undecomposed, rounds),
            });
        }

        // New sample: inequivalent to every current sample on all but at most
        // two balls. Prefer the fewest balls removed, then the lowest id.
        let mut best: Option<(usize, Vertex, Vec<usize>)> = None;
        for v in (0..g.n()).filter(|v| !samples.contains(v)) {
            let mut removed: Vec<usize> = balls
                .iter()
                .enumerate()
                .filter(|(_, ball)| samples.iter().any(|&s| phi_equivalent_over(g, v, s, ball)))
                .map(|(j, _)| j)
                .collect();
            if removed.len() > 2 {
                continue;
            }
            if let Some(j) = balls.iter().position(|b| b.contains(v)) {
                if !removed.contains(&j) {
                    removed.push(j);
                }
            }
            if best.as_ref().is_none_or(|(cost, _, _)| removed.len() < *cost) {
                best = Some((removed.len(), v, removed));
            }
        }
        let Some((_, sample, removed)) = best else {
            let partial = partial(&survivors, &samples, undecomposed, rounds);
            return Err(match unstable {
                Some(vertex) => SampleSetError::StableMode { vertex, partial },
                None => SampleSetError::NoCandidate { partial },
            });
        };
        samples.push(sample);
        let kept = survivors
            .as_slice()
            .iter()
            .enumerate()
            .filter(|(j, _)| !removed.contains(j))
            .map(|(_, &c)| c)
            .collect();
        survivors = Sequence::new(kept)?;
    }
}

/// The first way in which a claimed sample-set result is invalid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SampleViolation {
    OverlappingBalls { first: Vertex, second: Vertex },
    NotSubsequence,
    DuplicateSample(Vertex),
    SampleInBall { sample: Vertex, position: usize },
    EquivalentSamples { first: Vertex, second: Vertex, position: usize },
    CertificateCount { expected: usize, found: usize },
    CertificateOutOfRange { vertex: Vertex },
    /// `vertex` is not equivalent to the certified sample over the ball at
    /// `position`.
    CertificateMismatch { vertex: Vertex, position: usize, sample: Vertex },
    Containment { vertex: Vertex, position: usize, ex: usize },
    NotStable { vertex: Vertex },
}

/// Re-checks a [`SampleSetResult`] from scratch. `None` means valid.
pub fn verify_sample_set(g: &Graph, input: &DisjointFamilyInput, result: &SampleSetResult) -> Option<SampleViolation> {
    match check_disjoint(g, input) {
        Ok(_) => {}
        Err(SampleSetError::OverlappingBalls { first, second }) => {
            return Some(SampleViolation::OverlappingBalls { first, second })
        }
        Err(_) => return Some(SampleViolation::NotSubsequence),
    }
    let seq = result.subseq.as_slice();
    if !result.subseq.is_subsequence_of(input.centers.as_slice()) {
        return Some(SampleViolation::NotSubsequence);
    }
    if seq.is_empty() {
        return None;
    }
    let samples = &result.samples;
    for (p, &s) in samples.iter().enumerate() {
        if s >= g.n() {
            return Some(SampleViolation::CertificateOutOfRange { vertex: s });
        }
        if samples[..p].contains(&s) {
            return Some(SampleViolation::DuplicateSample(s));
        }
    }
    let balls = balls_of(g, seq, input.half_radius);
    for (position, ball) in balls.iter().enumerate() {
        if let Some(&sample) = samples.iter().find(|&&s| ball.contains(s)) {
            return Some(SampleViolation::SampleInBall { sample, position });
        }
        for (p, &first) in samples.iter().enumerate() {
            if let Some(&second) = samples[p + 1..].iter().find(|&&t| phi_equivalent_over(g, first, t, ball)) {
                return Some(SampleViolation::EquivalentSamples { first, second, position });
            }
        }
    }
    if result.certificates.len() != g.n() {
        return Some(SampleViolation::CertificateCount { expected: g.n(), found: result.certificates.len() });
    }
    for (a, cert) in result.certificates.iter().enumerate() {
        if cert.ex >= seq.len() || cert.s_lt >= samples.len() || cert.s_gt >= samples.len() {
            return Some(SampleViolation::CertificateOutOfRange { vertex: a });
        }
        if input.mode == Mode::Stable && cert.s_lt != cert.s_gt {
            return Some(SampleViolation::NotStable { vertex: a });
        }
        for (position, ball) in balls.iter().enumerate() {
            if ball.contains(a) && position != cert.ex {
                return Some(SampleViolation::Containment { vertex: a, position, ex: cert.ex });
            }
            let sample = match position.cmp(&cert.ex) {
                core::cmp::Ordering::Less => samples[cert.s_lt],
                core::cmp::Ordering::Greater => samples[cert.s_gt],
                core::cmp::Ordering::Equal => continue,
            };
            if !phi_equivalent_over(g, a, sample, ball) {
                return Some(SampleViolation::CertificateMismatch { vertex: a, position, sample });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{clique, generate, Family};

    fn input(centers: Vec<Vertex>, half_radius: usize, mode: Mode) -> DisjointFamilyInput {
        DisjointFamilyInput { centers: Sequence::new(centers).unwrap(), half_radius, mode }
    }

    fn run(g: &Graph, inp: &DisjointFamilyInput) -> SampleSetResult {
        let res = build_sample_set(g, inp, &SampleBudget::default(), &ExtractionConfig::default()).unwrap();
        assert_eq!(verify_sample_set(g, inp, &res), None);
        res
    }

    #[test]
    fn equivalence_basics() {
        let g = Graph::empty(4);
        let ball = VertexSet::singleton(2);
        assert!(phi_equivalent_over(&g, 1, 1, &ball));
        assert!(phi_equivalent_over(&g, 0, 1, &ball));
        assert!(!phi_equivalent_over(&g, 2, 1, &ball));
        // Two leaves of star 1 look alike from star 0.
        let sf = generate(&Family::StarForest { stars: 2, leaves: 3 }).unwrap();
        assert!(phi_equivalent_over(&sf, 5, 6, &sf.ball(0, 1).unwrap()));
    }

    #[test]
    fn decomposition_cases() {
        let g = Graph::empty(6);
        let balls: Vec<VertexSet> = (0..3).map(VertexSet::singleton).collect();
        assert_eq!(decompose_exceptional(&g, &[], &balls, 4, Mode::Nip), None);
        let uniform = Certificate { ex: 2, s_lt: 0, s_gt: 0 };
        assert_eq!(decompose_exceptional(&g, &[5], &balls, 4, Mode::Stable), Some(uniform));
        let own = Certificate { ex: 1, s_lt: 0, s_gt: 0 };
        assert_eq!(decompose_exceptional(&g, &[5], &balls, 1, Mode::Stable), Some(own));
        // Vertex 0 of a path 0-1-2-3 against samples {3}: fails on ball {0}
        // (membership) and ball {1} (adjacency): no single exception.
        let p = generate(&Family::Path { n: 4 }).unwrap();
        let balls: Vec<VertexSet> = [0, 1, 2].into_iter().map(VertexSet::singleton).collect();
        assert_eq!(decompose_exceptional(&p, &[3], &balls, 0, Mode::Nip), None);
    }

    #[test]
    fn nip_split_with_two_samples() {
        // Centres 0..4 with singleton balls; sample 4 sees all of them, sample 5
        // none, and vertex 6 sees the first two: like 4 before, like 5 after.
        let g = Graph::new(7, [(4, 0), (4, 1), (4, 2), (4, 3), (6, 0), (6, 1)]).unwrap();
        let balls: Vec<VertexSet> = (0..4).map(VertexSet::singleton).collect();
        let c = decompose_exceptional(&g, &[4, 5], &balls, 6, Mode::Nip);
        assert_eq!(c, Some(Certificate { ex: 1, s_lt: 0, s_gt: 1 }));
        assert_eq!(decompose_exceptional(&g, &[4, 5], &balls, 6, Mode::Stable), None);
    }

    #[test]
    fn edgeless_clique_and_star_forest() {
        let g = Graph::empty(50);
        let res = run(&g, &input((0..10).collect(), 0, Mode::Stable));
        assert_eq!((res.samples.len(), res.subseq.len()), (1, 10));

        let k = clique(30);
        let res = run(&k, &input((0..10).collect(), 0, Mode::Stable));
        assert!(res.samples.len() <= 2);

        let sf = generate(&Family::StarForest { stars: 10, leaves: 8 }).unwrap();
        let centers: Vec<Vertex> = (0..10).map(|s| s * 9).collect();
        let res = run(&sf, &input(centers, 1, Mode::Stable));
        assert_eq!(res.samples.len(), 1);
        for (pos, &c) in res.subseq.as_slice().iter().enumerate() {
            for leaf in c + 1..c + 9 {
                assert_eq!(res.certificates[leaf].ex, pos);
            }
        }
    }

    #[test]
    fn rejects_overlapping_balls_and_accepts_empty() {
        let p = generate(&Family::Path { n: 5 }).unwrap();
        let err = build_sample_set(&p, &input(vec![0, 2], 1, Mode::Nip), &SampleBudget::default(), &ExtractionConfig::default());
        assert_eq!(err, Err(SampleSetError::OverlappingBalls { first: 0, second: 2 }));
        let empty = input(vec![], 0, Mode::Stable);
        let res = run(&p, &empty);
        assert!(res.samples.is_empty() && res.certificates.is_empty());
    }

    #[test]
    fn corrupted_certificate_is_caught() {
        let sf = generate(&Family::StarForest { stars: 4, leaves: 3 }).unwrap();
        let inp = input((0..4).map(|s| s * 4).collect(), 1, Mode::Stable);
        let mut res = run(&sf, &inp);
        let leaf = res.subseq.as_slice()[0] + 1;
        res.certificates[leaf].ex += 1;
        assert!(matches!(
            verify_sample_set(&sf, &inp, &res),
            Some(SampleViolation::Containment { vertex, .. } | SampleViolation::CertificateMismatch { vertex, .. }) if vertex == leaf
        ));
    }
}
