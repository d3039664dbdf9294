//! Randomised invariants checked against the matrix reference in `common`.

#![allow(clippy::needless_range_loop)]

mod common;

use proptest::prelude::*;

use flipwide_core::formulas::{Atom, EvalContext};
use flipwide_core::indiscernibles::{
    em_type, extract_indiscernible, is_delta_indiscernible, Delta, ExtractError, ExtractionConfig, Sequence,
};
use flipwide_core::{apply_flips, Flip, Graph, VertexSet};

use common::*;

const MAX_N: usize = 9;

fn graph() -> impl Strategy<Value = Graph> {
    (1..=MAX_N).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
            Graph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(p, _)| p)).unwrap()
        })
    })
}

fn flip(n: usize) -> impl Strategy<Value = Flip> {
    let side = proptest::collection::vec(any::<bool>(), n)
        .prop_map(|bits| bits.iter().enumerate().filter(|(_, b)| **b).map(|(i, _)| i).collect::<VertexSet>());
    (side.clone(), side).prop_map(|(a, b)| Flip::new(a, b))
}

fn graph_and_flips(max_flips: usize) -> impl Strategy<Value = (Graph, Vec<Flip>)> {
    graph().prop_flat_map(move |g| {
        let n = g.n();
        (Just(g), proptest::collection::vec(flip(n), 0..=max_flips))
    })
}

proptest! {
    #[test]
    fn flipping_matches_reference((g, flips) in graph_and_flips(4)) {
        let h = apply_flips(&g, &flips).unwrap();
        prop_assert_eq!(matrix(&h), flipped(&matrix(&g), &flip_lists(&flips)));
    }

    #[test]
    fn flipping_twice_is_identity((g, flips) in graph_and_flips(4)) {
        let h = apply_flips(&g, &flips).unwrap();
        prop_assert_eq!(apply_flips(&h, &flips).unwrap(), g);
    }

    #[test]
    fn flip_order_is_irrelevant((g, flips) in graph_and_flips(5), seed in any::<u64>()) {
        let mut shuffled = flips.clone();
        // Fisher–Yates driven by the proptest seed.
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            shuffled.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(apply_flips(&g, &flips).unwrap(), apply_flips(&g, &shuffled).unwrap());
    }

    #[test]
    fn mirror_flip_cancels((g, flips) in graph_and_flips(1)) {
        for f in &flips {
            let mirror = Flip::new(f.b.clone(), f.a.clone());
            prop_assert_eq!(apply_flips(&g, [f, &mirror]).unwrap(), g.clone());
        }
    }

    #[test]
    fn bfs_agrees_with_floyd_warshall(g in graph(), limit in 0usize..6) {
        let d = floyd_warshall(&matrix(&g));
        for s in 0..g.n() {
            let bfs = g.distances_from([s], limit);
            for v in 0..g.n() {
                let expected = (d[s][v] <= limit).then_some(d[s][v]);
                prop_assert_eq!(bfs[v], expected);
            }
        }
        let table = g.all_pairs_distance();
        for u in 0..g.n() {
            for v in 0..g.n() {
                prop_assert_eq!(table.get(u, v), (d[u][v] != INF).then_some(d[u][v]));
            }
        }
    }

    #[test]
    fn independence_agrees_with_reference(g in graph(), r in 0usize..5, mask in any::<u16>()) {
        let set: Vec<usize> = (0..g.n()).filter(|&v| mask >> v & 1 == 1).collect();
        let d = floyd_warshall(&matrix(&g));
        prop_assert_eq!(g.is_distance_r_independent(&set, r).unwrap(), independent(&d, &set, r));
    }

    #[test]
    fn extraction_is_sound(g in graph(), k in 1usize..=3, with_constant in any::<bool>()) {
        let constants = if with_constant { vec![0] } else { vec![] };
        let phi = if with_constant { vec![Atom::EqNbhd(0)] } else { vec![Atom::Edge] };
        let ctx = EvalContext::new(&g, constants, 1).unwrap();
        let delta = Delta::type_patterns(phi, k);
        let seq = Sequence::new((0..g.n()).collect()).unwrap();
        let cfg = ExtractionConfig { max_pattern_length: k, ..Default::default() };
        let out = match extract_indiscernible(&ctx, &delta, &seq, &cfg) {
            Ok(s) => s,
            Err(ExtractError::Shortfall { achieved, .. }) => achieved,
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(out.is_subsequence_of(seq.as_slice()));
        prop_assert!(!out.is_empty());
        prop_assert_eq!(is_delta_indiscernible(&ctx, &delta, &out).unwrap(), None);
    }

    #[test]
    fn em_type_grows_on_subsequences(g in graph(), keep in any::<u16>()) {
        let ctx = EvalContext::new(&g, vec![], 1).unwrap();
        let delta = Delta::type_patterns(vec![Atom::Edge], 2);
        let full = Sequence::new((0..g.n()).collect()).unwrap();
        let sub = Sequence::new((0..g.n()).filter(|&v| keep >> v & 1 == 1).collect()).unwrap();
        let big = em_type(&ctx, &delta, &full, 1 << 12).unwrap();
        let small = em_type(&ctx, &delta, &sub, 1 << 12).unwrap();
        for p in &big {
            prop_assert!(small.contains(p));
        }
    }
}
