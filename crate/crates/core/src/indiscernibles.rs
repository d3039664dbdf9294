//! Indiscernibility checks, EM-types and extraction of indiscernible
//! subsequences.
//!
//! A sequence `y₁ … y_m` is Δ-indiscernible when every pattern formula `γ` of
//! Δ has the same truth value on all increasing tuples of its length. For a
//! tuple `(y_{i₁}, …, y_{i_ℓ})` the *realised set* is
//! `{(type(z, y_{i₁}), …, type(z, y_{i_ℓ})) : z ∈ V}`; a type pattern holds on
//! the tuple iff it is in the realised set, and a boolean-combination pattern
//! holds iff one of its type choices does. Indiscernibility for all type
//! patterns of a length is therefore equality of realised sets, which is how
//! [`PatternFamily::AllTypes`] is decided without materialising
//! `(2^|Φ|)^ℓ` patterns.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::ControlFlow;

use thiserror::Error;

use crate::error::{Error, Result};
use crate::formulas::{enumerate_type_patterns, Atom, EvalContext, Pattern, PhiType};
use crate::generators::SplitMix64;
use crate::graph::Vertex;
use crate::set::VertexSet;

/// Longest supported pattern length (8 × 16-bit type ids per packed key).
pub const MAX_PATTERN_LEN: usize = 8;

/// An ordered list of pairwise distinct vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sequence(Vec<Vertex>);

impl Sequence {
    pub fn new(items: Vec<Vertex>) -> Result<Self> {
        let mut seen = VertexSet::new();
        for &v in &items {
            if !seen.insert(v) {
                return Err(Error::DuplicateVertex(v));
            }
        }
        Ok(Self(items))
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether `self` occurs in `other` in order (not necessarily contiguously).
    pub fn is_subsequence_of(&self, other: &[Vertex]) -> bool {
        let mut rest = other.iter();
        self.0.iter().all(|v| rest.any(|w| w == v))
    }

    pub fn to_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }
}

/// The pattern formulas Δ to be homogeneous on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternFamily {
    /// An explicit list of patterns (boolean combinations allowed).
    Explicit(Vec<Pattern>),
    /// Every type pattern of length `1..=max_len`; equivalent to the full
    /// boolean-combination closure for indiscernibility.
    AllTypes { max_len: usize },
}

/// A set Δ of pattern formulas over the atom list Φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Delta {
    pub phi: Vec<Atom>,
    pub family: PatternFamily,
}

impl Delta {
    pub fn type_patterns(phi: Vec<Atom>, max_len: usize) -> Self {
        Self { phi, family: PatternFamily::AllTypes { max_len } }
    }

    pub fn explicit(phi: Vec<Atom>, patterns: Vec<Pattern>) -> Self {
        Self { phi, family: PatternFamily::Explicit(patterns) }
    }

    /// Distinct pattern lengths, ascending.
    pub fn lengths(&self) -> Vec<usize> {
        match &self.family {
            PatternFamily::AllTypes { max_len } => (1..=*max_len).collect(),
            PatternFamily::Explicit(ps) => {
                let mut ls: Vec<usize> = ps.iter().map(Pattern::len).collect();
                ls.sort_unstable();
                ls.dedup();
                ls
            }
        }
    }

    fn validate(&self, ctx: &EvalContext<'_>) -> Result<()> {
        ctx.check_phi(&self.phi)?;
        if self.lengths().last().is_some_and(|&l| l > MAX_PATTERN_LEN) {
            return Err(Error::Budget { what: "pattern length", limit: MAX_PATTERN_LEN });
        }
        if let PatternFamily::Explicit(ps) = &self.family {
            let types = 1u128 << self.phi.len();
            for p in ps {
                if p.entries().iter().flat_map(|e| e.types()).any(|t| u128::from(t.0) >= types) {
                    return Err(Error::InvalidParameter("pattern entry mentions an unknown formula"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Majority filtering for length 1, end-homogeneous greedy Ramsey
    /// recursion for longer patterns.
    GreedyRamsey,
    /// The Ramsey recursion plus greedy scans that keep one target colour
    /// class (the most frequent colours among sampled tuples); the longest
    /// result wins, ties going to the Ramsey output.
    #[default]
    BestOf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractionConfig {
    /// Minimum acceptable output length `m`.
    pub target_length: usize,
    /// Maximum pattern length `k` used when Δ is built from a Φ-list.
    pub max_pattern_length: usize,
    /// Cap on materialised pattern lists.
    pub pattern_cap: usize,
    pub strategy: Strategy,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self { target_length: 1, max_pattern_length: 4, pattern_cap: 1 << 16, strategy: Strategy::BestOf }
    }
}

/// Two increasing tuples on which `pattern` has different truth values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub pattern: Pattern,
    pub holds_on: Vec<Vertex>,
    pub fails_on: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error(transparent)]
    Input(#[from] Error),
    #[error("extraction reached only {} of the requested {target} elements", achieved.len())]
    Shortfall { achieved: Sequence, target: usize, blocking: Option<Pattern> },
}

/// Φ-types of every vertex towards every sequence element, interned to small
/// ids so that a tuple's witness types pack into one `u128`.
struct TypeTable {
    n: usize,
    m: usize,
    ids: Vec<u16>,
    types: Vec<PhiType>,
}

impl TypeTable {
    fn build(ctx: &EvalContext<'_>, phi: &[Atom], seq: &[Vertex]) -> Result<Self> {
        let n = ctx.graph().n();
        let m = seq.len();
        let mut intern: BTreeMap<PhiType, u16> = BTreeMap::new();
        let mut types = Vec::new();
        let mut ids = Vec::with_capacity(n * m);
        for z in 0..n {
            for &y in seq {
                let t = ctx.type_of(phi, z, y);
                let id = match intern.get(&t) {
                    Some(&id) => id,
                    None => {
                        let id = u16::try_from(types.len())
                            .map_err(|_| Error::Budget { what: "distinct Φ-types", limit: 1 << 16 })?;
                        intern.insert(t, id);
                        types.push(t);
                        id
                    }
                };
                ids.push(id);
            }
        }
        Ok(Self { n, m, ids, types })
    }

    /// Sorted, deduplicated packed type tuples realised by some witness.
    fn realised(&self, positions: &[usize]) -> Vec<u128> {
        let mut keys: Vec<u128> = (0..self.n)
            .map(|z| {
                let row = &self.ids[z * self.m..(z + 1) * self.m];
                positions
                    .iter()
                    .enumerate()
                    .fold(0u128, |acc, (i, &p)| acc | u128::from(row[p]) << (16 * i))
            })
            .collect();
        keys.sort_unstable();
        keys.dedup();
        keys
    }

    fn unpack(&self, key: u128, len: usize) -> Vec<PhiType> {
        (0..len).map(|i| self.types[(key >> (16 * i)) as u16 as usize]).collect()
    }

    fn pattern_holds(&self, realised: &[u128], pattern: &Pattern) -> bool {
        realised.iter().any(|&k| pattern.accepts(&self.unpack(k, pattern.len())))
    }
}

/// Colouring of increasing tuples of one length by the truth values of Δ.
struct Colouring<'a> {
    table: &'a TypeTable,
    patterns: Option<Vec<&'a Pattern>>,
}

impl<'a> Colouring<'a> {
    fn new(table: &'a TypeTable, delta: &'a Delta, len: usize) -> Self {
        let patterns = match &delta.family {
            PatternFamily::AllTypes { .. } => None,
            PatternFamily::Explicit(ps) => Some(ps.iter().filter(|p| p.len() == len).collect()),
        };
        Self { table, patterns }
    }

    /// A key determining the truth value of every pattern of this length.
    fn key(&self, positions: &[usize]) -> Vec<u128> {
        let realised = self.table.realised(positions);
        match &self.patterns {
            None => realised,
            Some(ps) => {
                let mut bits = alloc::vec![0u128; ps.len().div_ceil(128)];
                for (i, p) in ps.iter().enumerate() {
                    if self.table.pattern_holds(&realised, p) {
                        bits[i / 128] |= 1 << (i % 128);
                    }
                }
                bits
            }
        }
    }

    /// A pattern distinguishing two tuples with different keys, and whether
    /// it holds on the first.
    fn distinguish(&self, first: &[usize], second: &[usize]) -> Option<(Pattern, bool)> {
        let len = first.len();
        let (r1, r2) = (self.table.realised(first), self.table.realised(second));
        match &self.patterns {
            None => {
                let only_first = r1.iter().find(|k| r2.binary_search(k).is_err());
                let (key, holds) = match only_first {
                    Some(&k) => (k, true),
                    None => (*r2.iter().find(|k| r1.binary_search(k).is_err())?, false),
                };
                Some((Pattern::of_types(&self.table.unpack(key, len)).ok()?, holds))
            }
            Some(ps) => ps.iter().find_map(|p| {
                let h1 = self.table.pattern_holds(&r1, p);
                (h1 != self.table.pattern_holds(&r2, p)).then(|| ((*p).clone(), h1))
            }),
        }
    }
}

/// Calls `f` on every increasing `k`-subset of `0..n`, lexicographically.
fn for_each_combination<F>(n: usize, k: usize, mut f: F) -> ControlFlow<()>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if k > n {
        return ControlFlow::Continue(());
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx)?;
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return ControlFlow::Continue(());
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// First pair of increasing tuples (over `positions`) where the colouring
/// differs from the first tuple.
fn find_inhomogeneity(col: &Colouring<'_>, positions: &[usize], len: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    if positions.len() < len {
        return None;
    }
    let reference: Vec<usize> = positions[..len].to_vec();
    let ref_key = col.key(&reference);
    let mut tuple = Vec::with_capacity(len);
    let mut found = None;
    let _ = for_each_combination(positions.len(), len, |combo| {
        tuple.clear();
        tuple.extend(combo.iter().map(|&i| positions[i]));
        if col.key(&tuple) != ref_key {
            found = Some(tuple.clone());
            return ControlFlow::Break(());
        }
        ControlFlow::Continue(())
    });
    found.map(|t| (reference, t))
}

fn counterexample(col: &Colouring<'_>, seq: &[Vertex], first: &[usize], second: &[usize]) -> Counterexample {
    let (pattern, holds_on_first) = col.distinguish(first, second).expect("keys differ, so a pattern differs");
    let verts = |ps: &[usize]| ps.iter().map(|&p| seq[p]).collect::<Vec<_>>();
    let (holds, fails) = if holds_on_first { (first, second) } else { (second, first) };
    Counterexample { pattern, holds_on: verts(holds), fails_on: verts(fails) }
}

/// `None` if `seq` is Δ-indiscernible, otherwise a counterexample. The check
/// is exhaustive over all increasing tuples of each pattern length.
pub fn is_delta_indiscernible(ctx: &EvalContext<'_>, delta: &Delta, seq: &Sequence) -> Result<Option<Counterexample>> {
    delta.validate(ctx)?;
    let table = TypeTable::build(ctx, &delta.phi, seq.as_slice())?;
    let positions: Vec<usize> = (0..seq.len()).collect();
    for len in delta.lengths() {
        let col = Colouring::new(&table, delta, len);
        if let Some((a, b)) = find_inhomogeneity(&col, &positions, len) {
            return Ok(Some(counterexample(&col, seq.as_slice(), &a, &b)));
        }
    }
    Ok(None)
}

/// Patterns of Δ true on every increasing tuple of `seq` (vacuously true for
/// lengths exceeding `|seq|`).
pub fn em_type(ctx: &EvalContext<'_>, delta: &Delta, seq: &Sequence, cap: usize) -> Result<Vec<Pattern>> {
    delta.validate(ctx)?;
    let table = TypeTable::build(ctx, &delta.phi, seq.as_slice())?;
    let mut out = Vec::new();
    for len in delta.lengths() {
        match &delta.family {
            PatternFamily::Explicit(ps) => {
                for p in ps.iter().filter(|p| p.len() == len) {
                    let mut all = true;
                    let _ = for_each_combination(seq.len(), len, |combo| {
                        if !table.pattern_holds(&table.realised(combo), p) {
                            all = false;
                            return ControlFlow::Break(());
                        }
                        ControlFlow::Continue(())
                    });
                    if all {
                        out.push(p.clone());
                    }
                }
            }
            PatternFamily::AllTypes { .. } if seq.len() < len => {
                let all = enumerate_type_patterns(delta.phi.len(), len, cap)?;
                out.extend(all.into_iter().filter(|p| p.len() == len));
            }
            PatternFamily::AllTypes { .. } => {
                let mut common: Option<Vec<u128>> = None;
                let _ = for_each_combination(seq.len(), len, |combo| {
                    let r = table.realised(combo);
                    common = Some(match common.take() {
                        None => r,
                        Some(c) => c.into_iter().filter(|k| r.binary_search(k).is_ok()).collect(),
                    });
                    if common.as_ref().is_some_and(Vec::is_empty) {
                        ControlFlow::Break(())
                    } else {
                        ControlFlow::Continue(())
                    }
                });
                for key in common.unwrap_or_default() {
                    out.push(Pattern::of_types(&table.unpack(key, len))?);
                }
            }
        }
        if out.len() > cap {
            return Err(Error::Budget { what: "EM-type size", limit: cap });
        }
    }
    out.sort();
    Ok(out)
}

/// Extracts a Δ-indiscernible subsequence (order preserving). An input that is
/// already indiscernible is returned unchanged.
pub fn extract_indiscernible(
    ctx: &EvalContext<'_>,
    delta: &Delta,
    seq: &Sequence,
    cfg: &ExtractionConfig,
) -> Result<Sequence, ExtractError> {
    delta.validate(ctx)?;
    if let PatternFamily::Explicit(ps) = &delta.family {
        if ps.len() > cfg.pattern_cap {
            return Err(Error::Budget { what: "pattern count", limit: cfg.pattern_cap }.into());
        }
    }
    let table = TypeTable::build(ctx, &delta.phi, seq.as_slice())?;
    let mut positions: Vec<usize> = (0..seq.len()).collect();
    let mut blocking = None;
    for len in delta.lengths() {
        let col = Colouring::new(&table, delta, len);
        let Some((a, b)) = find_inhomogeneity(&col, &positions, len) else {
            continue;
        };
        let before = positions.len();
        let mut cache = ColourCache::new(&col);
        let mut best = homogenize(&positions, len, &mut |t: &[usize]| cache.colour(t));
        if cfg.strategy == Strategy::BestOf {
            for kappa in frequent_colours(&mut cache, &positions, len) {
                let candidate = class_greedy(&mut cache, &positions, len, kappa);
                if candidate.len() > best.len() {
                    best = candidate;
                }
            }
        }
        positions = best;
        if before >= cfg.target_length && positions.len() < cfg.target_length {
            blocking = Some(counterexample(&col, seq.as_slice(), &a, &b).pattern);
        }
    }
    let achieved = Sequence(positions.iter().map(|&p| seq.as_slice()[p]).collect());
    if achieved.len() < cfg.target_length {
        return Err(ExtractError::Shortfall { achieved, target: cfg.target_length, blocking });
    }
    Ok(achieved)
}

/// Interned, memoised tuple colours.
struct ColourCache<'c, 'a> {
    col: &'c Colouring<'a>,
    interner: BTreeMap<Vec<u128>, u32>,
    memo: BTreeMap<Vec<usize>, u32>,
}

impl<'c, 'a> ColourCache<'c, 'a> {
    fn new(col: &'c Colouring<'a>) -> Self {
        Self { col, interner: BTreeMap::new(), memo: BTreeMap::new() }
    }

    fn colour(&mut self, tuple: &[usize]) -> u32 {
        if let Some(&c) = self.memo.get(tuple) {
            return c;
        }
        let key = self.col.key(tuple);
        let next = self.interner.len() as u32;
        let c = *self.interner.entry(key).or_insert(next);
        self.memo.insert(tuple.to_vec(), c);
        c
    }
}

const COLOUR_SAMPLES: usize = 256;
const COLOUR_CANDIDATES: usize = 3;
/// Colour evaluations allowed when checking that a short prefix extends.
const EXTENSION_BUDGET: usize = 20_000;

/// The most frequent colours among (a deterministic sample of) increasing
/// tuples, most frequent first.
fn frequent_colours(cache: &mut ColourCache<'_, '_>, positions: &[usize], len: usize) -> Vec<u32> {
    let n = positions.len();
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    let mut tuple = Vec::with_capacity(len);
    let total = binomial(n, len);
    if total <= COLOUR_SAMPLES {
        let _ = for_each_combination(n, len, |combo| {
            tuple.clear();
            tuple.extend(combo.iter().map(|&i| positions[i]));
            *counts.entry(cache.colour(&tuple)).or_default() += 1;
            ControlFlow::Continue(())
        });
    } else {
        let mut rng = SplitMix64::new(0x5EED ^ (n as u64) << 8 ^ len as u64);
        for _ in 0..COLOUR_SAMPLES {
            let mut idx: Vec<usize> = Vec::with_capacity(len);
            while idx.len() < len {
                let i = rng.below(n);
                if !idx.contains(&i) {
                    idx.push(i);
                }
            }
            idx.sort_unstable();
            tuple.clear();
            tuple.extend(idx.iter().map(|&i| positions[i]));
            *counts.entry(cache.colour(&tuple)).or_default() += 1;
        }
    }
    let mut ranked: Vec<(usize, u32)> = counts.into_iter().map(|(c, k)| (k, c)).collect();
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    ranked.into_iter().take(COLOUR_CANDIDATES).map(|(_, c)| c).collect()
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Scans `positions` in order, keeping an element when every completed tuple
/// has colour `kappa` and, while fewer than `len` elements are kept, when the
/// kept prefix still extends to a `kappa`-coloured tuple with later elements.
fn class_greedy(cache: &mut ColourCache<'_, '_>, positions: &[usize], len: usize, kappa: u32) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut tuple = Vec::with_capacity(len);
    for (idx, &x) in positions.iter().enumerate() {
        let ok = if chosen.len() + 1 >= len {
            let mut all = true;
            let _ = for_each_combination(chosen.len(), len - 1, |combo| {
                tuple.clear();
                tuple.extend(combo.iter().map(|&i| chosen[i]));
                tuple.push(x);
                if cache.colour(&tuple) != kappa {
                    all = false;
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            all
        } else {
            let mut prefix = chosen.clone();
            prefix.push(x);
            let rest = &positions[idx + 1..];
            let need = len - prefix.len();
            let mut budget = EXTENSION_BUDGET;
            let mut found = false;
            let _ = for_each_combination(rest.len(), need, |combo| {
                tuple.clear();
                tuple.extend_from_slice(&prefix);
                tuple.extend(combo.iter().map(|&i| rest[i]));
                if cache.colour(&tuple) == kappa {
                    found = true;
                    return ControlFlow::Break(());
                }
                budget -= 1;
                if budget == 0 {
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            found
        };
        if ok {
            chosen.push(x);
        }
    }
    chosen
}

/// Greedy Ramsey homogenisation of a colouring of increasing `len`-tuples.
///
/// For `len ≥ 2` an end-homogeneous sequence is built first (the colour of a
/// tuple depends only on its first `len - 1` entries), then the induced
/// colouring of `(len-1)`-tuples is homogenised recursively. Majority choices
/// break ties towards the class containing the earliest element.
fn homogenize(items: &[usize], len: usize, colour: &mut dyn FnMut(&[usize]) -> u32) -> Vec<usize> {
    if items.len() < len || len == 0 {
        return items.to_vec();
    }
    if len == 1 {
        let mut classes: Vec<(u32, Vec<usize>)> = Vec::new();
        for &x in items {
            let c = colour(&[x]);
            match classes.iter_mut().find(|(k, _)| *k == c) {
                Some((_, members)) => members.push(x),
                None => classes.push((c, alloc::vec![x])),
            }
        }
        return majority(classes);
    }
    let mut chosen: Vec<usize> = Vec::new();
    let mut candidates: Vec<usize> = items.to_vec();
    let mut tuple = Vec::with_capacity(len);
    while !candidates.is_empty() {
        let head = candidates.remove(0);
        chosen.push(head);
        if chosen.len() + 1 < len || candidates.is_empty() {
            continue;
        }
        let prev = &chosen[..chosen.len() - 1];
        let mut classes: Vec<(Vec<u32>, Vec<usize>)> = Vec::new();
        for &x in &candidates {
            let mut key = Vec::new();
            let _ = for_each_combination(prev.len(), len - 2, |combo| {
                tuple.clear();
                tuple.extend(combo.iter().map(|&i| prev[i]));
                tuple.push(head);
                tuple.push(x);
                key.push(colour(&tuple));
                ControlFlow::Continue(())
            });
            match classes.iter_mut().find(|(k, _)| *k == key) {
                Some((_, members)) => members.push(x),
                None => classes.push((key, alloc::vec![x])),
            }
        }
        candidates = majority(classes);
    }
    let Some((&last, body)) = chosen.split_last() else {
        return chosen;
    };
    if body.len() + 1 < len {
        return chosen;
    }
    let mut induced = |t: &[usize]| -> u32 {
        let mut ext = Vec::with_capacity(t.len() + 1);
        ext.extend_from_slice(t);
        ext.push(last);
        colour(&ext)
    };
    homogenize(body, len - 1, &mut induced)
}

/// Largest class; ties go to the class seen first (which holds the earliest
/// element, since classes are created in scan order).
fn majority<K>(classes: Vec<(K, Vec<usize>)>) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for (_, members) in classes {
        if best.as_ref().is_none_or(|b| members.len() > b.len()) {
            best = Some(members);
        }
    }
    best.unwrap_or_default()
}
