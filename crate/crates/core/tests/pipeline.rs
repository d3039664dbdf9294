mod common;

use flipwide_core::flipwide::{flip_widen, FlipWideRequest, Parity};
use flipwide_core::generators::{clique, complement, generate, power, Family};
use flipwide_core::indiscernibles::Sequence;
use flipwide_core::oracles::{bipartite_canonical_pattern, CanonicalKind, SearchConfig};
use flipwide_core::sampleset::{build_sample_set, verify_sample_set, DisjointFamilyInput, Mode, SampleBudget};
use flipwide_core::{apply_flips, Graph};

use common::*;

fn all(g: &Graph) -> Sequence {
    Sequence::new((0..g.n()).collect()).unwrap()
}

#[test]
fn flip_widen_results_hold_under_reference_distances() {
    let graphs = [
        clique(20),
        generate(&Family::Grid { width: 6, height: 6 }).unwrap(),
        power(&generate(&Family::Path { n: 30 }).unwrap(), 2).unwrap(),
        complement(&generate(&Family::Matching { n: 12 }).unwrap()),
    ];
    for g in &graphs {
        for r in 1..=3 {
            let res = flip_widen(&FlipWideRequest::new(g, all(g), r, 1)).unwrap_or_else(|e| panic!("r={r}: {e}"));
            let h = apply_flips(g, res.flip_set.as_slice()).unwrap();
            let d = floyd_warshall(&matrix(&h));
            assert!(independent(&d, res.b_set.as_slice(), r));
            assert_eq!(res.trace.len(), r + 1);
            assert_eq!(res.trace[0].parity, Parity::Base);
            // Each level's survivors are a subsequence of the previous level's.
            for w in res.trace.windows(2) {
                assert!(w[1].surviving.is_subsequence_of(w[0].surviving.as_slice()));
            }
        }
    }
}

#[test]
fn flip_widen_is_deterministic() {
    let g = generate(&Family::RandomBoundedDegree { n: 40, max_degree: 3, seed: 7 }).unwrap();
    let req = FlipWideRequest::new(&g, all(&g), 2, 1);
    assert_eq!(flip_widen(&req), flip_widen(&req));
}

#[test]
fn sample_sets_in_nip_mode_verify() {
    let g = generate(&Family::HalfGraph { n: 8 }).unwrap();
    let input = DisjointFamilyInput { centers: Sequence::new((0..8).collect()).unwrap(), half_radius: 0, mode: Mode::Nip };
    let res = build_sample_set(&g, &input, &SampleBudget::default(), &Default::default()).unwrap();
    assert_eq!(verify_sample_set(&g, &input, &res), None);
    let m = matrix(&g);
    let d = floyd_warshall(&m);
    let bs = balls(&d, res.subseq.as_slice(), 0);
    for (a, cert) in res.certificates.iter().enumerate() {
        assert!(certificate_valid(&m, &bs, &res.samples, a, cert, false), "vertex {a}");
    }
}

#[test]
fn half_graph_sides_form_a_ladder() {
    let g = generate(&Family::HalfGraph { n: 5 }).unwrap();
    let left: Vec<usize> = (0..5).collect();
    let right: Vec<usize> = (5..10).collect();
    let adj = |a: usize, b: usize| g.has_edge(a, b);
    let p = bipartite_canonical_pattern(&left, &right, &adj, 5, &SearchConfig::default()).unwrap().unwrap();
    assert_eq!(p.kind, CanonicalKind::Ladder);
}
