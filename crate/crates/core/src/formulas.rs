//! The formula fragment evaluated by the algorithms.
//!
//! Formulas here have two free variables `φ(x, y)` with `x` a single vertex
//! and `y` a single centre vertex. The atoms are the edge relation,
//! `dist(x, y) ≤ ρ` for the context radius `ρ`, and neighbourhood equivalence
//! with a marked constant `c` over the ball around `y`:
//!
//! ```text
//! eq(c, x, y) := (x ∈ B(y) ↔ c ∈ B(y)) ∧ ∀w ∈ B(y): (E(x,w) ↔ E(c,w)),   B(y) = ball(y, ρ)
//! ```
//!
//! A Φ-type fixes the polarity of every formula of an active list Φ; a
//! pattern `(φ₁, …, φ_ℓ)` of boolean combinations (represented as sets of
//! Φ-types) yields the existential formula `γ(y₁..y_ℓ) = ∃z ⋀ φᵢ(z, yᵢ)`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::set::VertexSet;

/// Largest supported size of an active formula list.
pub const MAX_PHI: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    /// `E(x, y)`.
    Edge,
    /// `dist(x, y) ≤ ρ`.
    DistLeq,
    /// `eq(c, x, y)` for the constant with the given index.
    EqNbhd(usize),
}

/// The Φ-list `{eq(c₀,·,·), …, eq(c_{k-1},·,·)}`.
pub fn eq_atoms(k: usize) -> Vec<Atom> {
    (0..k).map(Atom::EqNbhd).collect()
}

/// Polarity vector over an active formula list: bit `j` is set iff formula
/// `j` occurs positively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhiType(pub u64);

impl PhiType {
    pub fn is_positive(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    /// All `2^count` types, in increasing bit order.
    pub fn all(count: usize) -> impl Iterator<Item = PhiType> {
        (0..1u64 << count).map(PhiType)
    }
}

/// A boolean combination over Φ, given by the set of Φ-types satisfying it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeSet(Vec<PhiType>);

impl TypeSet {
    /// Sorts and deduplicates; an empty truth table is rejected.
    pub fn new(mut types: Vec<PhiType>) -> Result<Self> {
        types.sort_unstable();
        types.dedup();
        if types.is_empty() {
            return Err(Error::InvalidParameter("pattern entry with an empty truth table"));
        }
        Ok(Self(types))
    }

    pub fn single(t: PhiType) -> Self {
        Self(alloc::vec![t])
    }

    pub fn contains(&self, t: PhiType) -> bool {
        self.0.binary_search(&t).is_ok()
    }

    pub fn types(&self) -> &[PhiType] {
        &self.0
    }

    pub fn is_subset(&self, other: &TypeSet) -> bool {
        self.0.iter().all(|t| other.contains(*t))
    }
}

/// A Φ-pattern `(φ₁, …, φ_ℓ)`, `ℓ ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pattern {
    entries: Vec<TypeSet>,
}

impl Pattern {
    pub fn new(entries: Vec<TypeSet>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty pattern"));
        }
        Ok(Self { entries })
    }

    /// A type pattern: every entry is a single Φ-type.
    pub fn of_types(types: &[PhiType]) -> Result<Self> {
        Self::new(types.iter().copied().map(TypeSet::single).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[TypeSet] {
        &self.entries
    }

    /// Whether a witness whose types towards the tuple are `types` realises
    /// the pattern.
    pub fn accepts(&self, types: &[PhiType]) -> bool {
        self.entries.len() == types.len() && self.entries.iter().zip(types).all(|(e, t)| e.contains(*t))
    }
}

/// A graph with marked constants and the ball preprocessing needed to
/// evaluate `eq` in time proportional to a word-packed ball.
#[derive(Clone, Debug)]
pub struct EvalContext<'g> {
    graph: &'g Graph,
    constants: Vec<Vertex>,
    ball_radius: usize,
    balls: Vec<VertexSet>,
    constant_nbhd: Vec<VertexSet>,
}

impl<'g> EvalContext<'g> {
    pub fn new(graph: &'g Graph, constants: Vec<Vertex>, ball_radius: usize) -> Result<Self> {
        for &c in &constants {
            graph.check_vertex(c)?;
        }
        let balls = (0..graph.n()).map(|v| graph.ball_unchecked(v, ball_radius)).collect();
        let constant_nbhd = constants.iter().map(|&c| graph.neighborhood(c).clone()).collect();
        Ok(Self { graph, constants, ball_radius, balls, constant_nbhd })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn constants(&self) -> &[Vertex] {
        &self.constants
    }

    pub fn ball_radius(&self) -> usize {
        self.ball_radius
    }

    /// Cached `ball(v, ball_radius)`.
    pub fn ball(&self, v: Vertex) -> &VertexSet {
        &self.balls[v]
    }

    /// Rejects atom lists that reference missing constants or are too long.
    pub fn check_phi(&self, phi: &[Atom]) -> Result<()> {
        if phi.len() > MAX_PHI {
            return Err(Error::Budget { what: "formula list length", limit: MAX_PHI });
        }
        for atom in phi {
            if let Atom::EqNbhd(index) = *atom {
                if index >= self.constants.len() {
                    return Err(Error::ConstantOutOfRange { index, count: self.constants.len() });
                }
            }
        }
        Ok(())
    }

    pub fn eval_eq_nbhd(&self, c: usize, x: Vertex, y: Vertex) -> Result<bool> {
        if c >= self.constants.len() {
            return Err(Error::ConstantOutOfRange { index: c, count: self.constants.len() });
        }
        self.graph.check_vertex(x)?;
        self.graph.check_vertex(y)?;
        Ok(self.eq_nbhd(c, x, y))
    }

    fn eq_nbhd(&self, c: usize, x: Vertex, y: Vertex) -> bool {
        let ball = &self.balls[y];
        ball.contains(x) == ball.contains(self.constants[c])
            && self.graph.neighborhood(x).agrees_within(&self.constant_nbhd[c], ball)
    }

    /// Evaluates one atom; the atom must have passed [`Self::check_phi`].
    pub fn eval_atom(&self, atom: Atom, x: Vertex, y: Vertex) -> bool {
        match atom {
            Atom::Edge => self.graph.has_edge(x, y),
            Atom::DistLeq => self.balls[y].contains(x),
            Atom::EqNbhd(c) => self.eq_nbhd(c, x, y),
        }
    }

    /// The unique Φ-type realised by `(x, y)`.
    pub fn type_of(&self, phi: &[Atom], x: Vertex, y: Vertex) -> PhiType {
        PhiType(
            phi.iter()
                .enumerate()
                .filter(|(_, a)| self.eval_atom(**a, x, y))
                .fold(0u64, |acc, (j, _)| acc | 1 << j),
        )
    }

    pub fn eval_type(&self, phi: &[Atom], tau: PhiType, x: Vertex, y: Vertex) -> bool {
        self.type_of(phi, x, y) == tau
    }

    /// Evaluates `γ_pattern(tuple)` by a linear scan over candidate
    /// witnesses; returns the smallest witness.
    pub fn eval_gamma(&self, phi: &[Atom], pattern: &Pattern, tuple: &[Vertex]) -> Result<Option<Vertex>> {
        if tuple.len() != pattern.len() {
            return Err(Error::LengthMismatch { tuple: tuple.len(), pattern: pattern.len() });
        }
        self.check_phi(phi)?;
        for &y in tuple {
            self.graph.check_vertex(y)?;
        }
        Ok((0..self.graph.n()).find(|&z| {
            pattern
                .entries()
                .iter()
                .zip(tuple)
                .all(|(entry, &y)| entry.contains(self.type_of(phi, z, y)))
        }))
    }
}

/// Number of type patterns of lengths `1..=k` over `phi_count` formulas, or
/// `None` on overflow.
pub fn type_pattern_count(phi_count: usize, k: usize) -> Option<usize> {
    let types = 1usize.checked_shl(phi_count as u32)?;
    let mut total = 0usize;
    let mut layer = 1usize;
    for _ in 0..k {
        layer = layer.checked_mul(types)?;
        total = total.checked_add(layer)?;
    }
    Some(total)
}

/// All patterns of length `1..=k` whose entries are single Φ-types, shortest
/// first and lexicographic within a length.
pub fn enumerate_type_patterns(phi_count: usize, k: usize, cap: usize) -> Result<Vec<Pattern>> {
    if k == 0 {
        return Err(Error::InvalidParameter("pattern length k must be at least 1"));
    }
    if phi_count > MAX_PHI {
        return Err(Error::Budget { what: "formula list length", limit: MAX_PHI });
    }
    match type_pattern_count(phi_count, k) {
        Some(count) if count <= cap => {}
        _ => return Err(Error::Budget { what: "type pattern count", limit: cap }),
    }
    let types: Vec<PhiType> = PhiType::all(phi_count).collect();
    let mut out = Vec::new();
    let mut current: Vec<Vec<PhiType>> = alloc::vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::with_capacity(current.len() * types.len());
        for prefix in &current {
            for &t in &types {
                let mut p = prefix.clone();
                p.push(t);
                next.push(p);
            }
        }
        for p in &next {
            out.push(Pattern::of_types(p)?);
        }
        current = next;
    }
    Ok(out)
}
