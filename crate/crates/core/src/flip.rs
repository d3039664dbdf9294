//! Flips `(A, B)` and their application `G ⊕ F`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::{Graph, Vertex};
use crate::set::VertexSet;

/// A flip toggles every pair `{u, v}`, `u ≠ v`, with `(u, v) ∈ (A×B) ∪ (B×A)`.
///
/// A pair is toggled once even when both orderings fall in `A×B` (membership,
/// not multiplicity). `A = B` toggles every pair inside `A`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flip {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl Flip {
    pub fn new(a: VertexSet, b: VertexSet) -> Self {
        Self { a, b }
    }

    /// True if the flip cannot toggle any pair.
    pub fn is_trivial(&self) -> bool {
        self.a.is_empty() || self.b.is_empty() || (self.a == self.b && self.a.len() == 1)
    }

    /// Whether this flip toggles the pair `{u, v}`.
    pub fn toggles(&self, u: Vertex, v: Vertex) -> bool {
        u != v
            && ((self.a.contains(u) && self.b.contains(v))
                || (self.b.contains(u) && self.a.contains(v)))
    }

    fn check_range(&self, n: usize) -> Result<()> {
        for side in [&self.a, &self.b] {
            if let Some(v) = side.max_member().filter(|&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(())
    }
}

/// An ordered collection of pairwise distinct flips.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FlipSet {
    flips: Vec<Flip>,
}

impl FlipSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `flip` unless an identical flip is already present. Returns
    /// whether it was added.
    pub fn insert(&mut self, flip: Flip) -> bool {
        if self.flips.contains(&flip) {
            return false;
        }
        self.flips.push(flip);
        true
    }

    /// Adds `flip`, or removes an identical flip already present. Either way
    /// `G ⊕ self` afterwards equals `(G ⊕ self_before) ⊕ flip`.
    pub fn insert_or_cancel(&mut self, flip: Flip) {
        match self.flips.iter().position(|f| *f == flip) {
            Some(idx) => {
                self.flips.remove(idx);
            }
            None => self.flips.push(flip),
        }
    }

    pub fn len(&self) -> usize {
        self.flips.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flips.is_empty()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Flip> {
        self.flips.iter()
    }

    pub fn as_slice(&self) -> &[Flip] {
        &self.flips
    }

    pub fn remove(&mut self, idx: usize) -> Flip {
        self.flips.remove(idx)
    }

    /// Number of flips in the set that toggle `{u, v}`.
    pub fn coverage(&self, u: Vertex, v: Vertex) -> usize {
        self.flips.iter().filter(|f| f.toggles(u, v)).count()
    }
}

impl FromIterator<Flip> for FlipSet {
    fn from_iter<I: IntoIterator<Item = Flip>>(iter: I) -> Self {
        let mut set = Self::new();
        for f in iter {
            set.insert(f);
        }
        set
    }
}

impl<'a> IntoIterator for &'a FlipSet {
    type Item = &'a Flip;
    type IntoIter = core::slice::Iter<'a, Flip>;

    fn into_iter(self) -> Self::IntoIter {
        self.flips.iter()
    }
}

/// `G ⊕ F`: each pair is toggled iff an odd number of flips in `fs` cover it.
pub fn apply_flips<'a, I>(g: &Graph, fs: I) -> Result<Graph>
where
    I: IntoIterator<Item = &'a Flip>,
{
    let n = g.n();
    let mut rows = g.rows().to_vec();
    for flip in fs {
        flip.check_range(n)?;
        let mut both = flip.a.clone();
        both.union_with(&flip.b);
        for u in &both {
            let toggle = match (flip.a.contains(u), flip.b.contains(u)) {
                (true, true) => &both,
                (true, false) => &flip.b,
                _ => &flip.a,
            };
            rows[u].symmetric_difference_with(toggle);
            // Rows never contain their own vertex, so the xor set it iff
            // `toggle` holds `u`.
            rows[u].remove(u);
        }
    }
    Ok(Graph::from_rows(rows))
}
