//! Reference computations for integration tests, written against plain
//! adjacency matrices so they share no code with the library's bitset and BFS
//! paths.

#![allow(dead_code, clippy::needless_range_loop)]

use flipwide_core::sampleset::Certificate;
use flipwide_core::{Flip, Graph};

pub const INF: usize = usize::MAX;

pub type Matrix = Vec<Vec<bool>>;

pub fn matrix(g: &Graph) -> Matrix {
    let n = g.n();
    let mut m = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        m[u][v] = true;
        m[v][u] = true;
    }
    m
}

/// Pair `{u, v}` is toggled by `(a, b)` iff `u ∈ a, v ∈ b` or `u ∈ b, v ∈ a`.
pub fn toggles(a: &[usize], b: &[usize], u: usize, v: usize) -> bool {
    u != v && ((a.contains(&u) && b.contains(&v)) || (b.contains(&u) && a.contains(&v)))
}

pub fn flipped(m: &Matrix, flips: &[(Vec<usize>, Vec<usize>)]) -> Matrix {
    let n = m.len();
    let mut out = m.clone();
    for (a, b) in flips {
        for u in 0..n {
            for v in 0..n {
                if toggles(a, b, u, v) {
                    out[u][v] = !out[u][v];
                }
            }
        }
    }
    out
}

pub fn flip_lists(flips: &[Flip]) -> Vec<(Vec<usize>, Vec<usize>)> {
    flips.iter().map(|f| (f.a.to_vec(), f.b.to_vec())).collect()
}

pub fn floyd_warshall(m: &Matrix) -> Vec<Vec<usize>> {
    let n = m.len();
    let mut d = vec![vec![INF; n]; n];
    for u in 0..n {
        d[u][u] = 0;
        for v in 0..n {
            if m[u][v] {
                d[u][v] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            if d[i][k] == INF {
                continue;
            }
            for j in 0..n {
                if d[k][j] != INF && d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Distinct members pairwise at distance `> r`.
pub fn independent(d: &[Vec<usize>], set: &[usize], r: usize) -> bool {
    set.iter().enumerate().all(|(i, &u)| set[..i].iter().all(|&v| u != v && d[u][v] > r))
}

/// `a` and `s` agree on membership in `ball` and on adjacency to every ball
/// vertex.
pub fn equivalent_over(m: &Matrix, ball: &[bool], a: usize, s: usize) -> bool {
    ball[a] == ball[s] && (0..m.len()).filter(|&w| ball[w]).all(|w| m[a][w] == m[s][w])
}

pub fn balls(d: &[Vec<usize>], centers: &[usize], radius: usize) -> Vec<Vec<bool>> {
    centers.iter().map(|&c| d[c].iter().map(|&x| x <= radius).collect()).collect()
}

/// Whether `cert` is a valid exceptional-index certificate for `a`.
pub fn certificate_valid(
    m: &Matrix,
    balls: &[Vec<bool>],
    samples: &[usize],
    a: usize,
    cert: &Certificate,
    stable: bool,
) -> bool {
    if cert.ex >= balls.len() || cert.s_lt >= samples.len() || cert.s_gt >= samples.len() {
        return false;
    }
    if stable && cert.s_lt != cert.s_gt {
        return false;
    }
    balls.iter().enumerate().all(|(i, ball)| {
        if i == cert.ex {
            true
        } else if ball[a] {
            false
        } else {
            let s = if i < cert.ex { samples[cert.s_lt] } else { samples[cert.s_gt] };
            equivalent_over(m, ball, a, s)
        }
    })
}
