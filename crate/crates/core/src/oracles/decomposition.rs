use alloc::vec::Vec;

use crate::error::Result;
use crate::formulas::{Atom, EvalContext, PhiType};
use crate::graph::Vertex;
use crate::sampleset::Mode;

/// `a` realises `before` towards every element preceding `ex` and `after`
/// towards every element following it (`before = after` in stable mode).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TypeDecomposition {
    pub ex: usize,
    pub before: PhiType,
    pub after: PhiType,
}

/// Why no decomposition exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Falsifier {
    pub profile: Vec<PhiType>,
    /// Nip: positions `i < j < k < l` with `tᵢ ≠ tⱼ` and `t_k ≠ t_l`, `j < k`,
    /// so neither half can be homogeneous. Stable: the positions disagreeing
    /// with the most frequent type (at least two).
    pub indices: Vec<usize>,
}

/// Splits the Φ-type profile of `a` along `seq` at one exceptional position.
/// A uniform profile gets `ex` = last position; otherwise the smallest valid
/// `ex` is reported.
pub fn decompose_sequence_types(
    ctx: &EvalContext<'_>,
    phi: &[Atom],
    seq: &[Vertex],
    a: Vertex,
    mode: Mode,
) -> Result<core::result::Result<TypeDecomposition, Falsifier>> {
    ctx.check_phi(phi)?;
    ctx.graph().check_vertex(a)?;
    for &y in seq {
        ctx.graph().check_vertex(y)?;
    }
    let profile: Vec<PhiType> = seq.iter().map(|&y| ctx.type_of(phi, a, y)).collect();
    Ok(decompose_profile(profile, mode))
}

fn decompose_profile(profile: Vec<PhiType>, mode: Mode) -> core::result::Result<TypeDecomposition, Falsifier> {
    let m = profile.len();
    let Some(&first) = profile.first() else {
        return Err(Falsifier { profile, indices: Vec::new() });
    };
    let last = profile[m - 1];
    if profile.iter().all(|&t| t == first) {
        return Ok(TypeDecomposition { ex: m - 1, before: first, after: first });
    }
    // First break from the head and last break from the tail.
    let p = profile.iter().position(|&t| t != first).unwrap_or(m);
    let q = profile.iter().rposition(|&t| t != last).unwrap_or(0);
    match mode {
        Mode::Nip => {
            // The prefix before ex must be constant (ex ≤ p) and so must the
            // suffix after it (ex ≥ q).
            if q <= p {
                // Positions before q agree with the head, positions after it
                // with the tail; an empty prefix takes the tail type.
                let before = if q == 0 { last } else { first };
                Ok(TypeDecomposition { ex: q, before, after: last })
            } else {
                Err(Falsifier { profile, indices: alloc::vec![0, p, q, m - 1] })
            }
        }
        Mode::Stable => {
            let count = |t: PhiType| profile.iter().filter(|&&u| u == t).count();
            let majority = profile.iter().copied().max_by_key(|&t| (count(t), core::cmp::Reverse(t))).unwrap_or(first);
            let off: Vec<usize> = (0..m).filter(|&j| profile[j] != majority).collect();
            if off.len() == 1 {
                Ok(TypeDecomposition { ex: off[0], before: majority, after: majority })
            } else {
                Err(Falsifier { profile, indices: off })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{generate, Family};
    use alloc::vec;

    const E: PhiType = PhiType(1);
    const N: PhiType = PhiType(0);

    #[test]
    fn profile_cases() {
        assert_eq!(decompose_profile(vec![E], Mode::Stable), Ok(TypeDecomposition { ex: 0, before: E, after: E }));
        assert_eq!(decompose_profile(vec![E, E, N, N], Mode::Nip), Ok(TypeDecomposition { ex: 1, before: E, after: N }));
        assert_eq!(decompose_profile(vec![E, N, N, N], Mode::Nip), Ok(TypeDecomposition { ex: 0, before: N, after: N }));
        assert_eq!(decompose_profile(vec![N, N, N, E], Mode::Nip), Ok(TypeDecomposition { ex: 2, before: N, after: E }));
        assert!(decompose_profile(vec![E, E, N, N], Mode::Stable).is_err());
        let err = decompose_profile(vec![E, N, E, N], Mode::Nip).unwrap_err();
        assert_eq!(err.indices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn matching_partner_is_stable() {
        let g = generate(&Family::Matching { n: 5 }).unwrap();
        let ctx = EvalContext::new(&g, vec![], 0).unwrap();
        let left: Vec<Vertex> = (0..5).map(|i| 2 * i).collect();
        let d = decompose_sequence_types(&ctx, &[Atom::Edge], &left, 5, Mode::Stable).unwrap().unwrap();
        assert_eq!(d, TypeDecomposition { ex: 2, before: N, after: N });
    }

    #[test]
    fn shatter_gadget_alternator_fails() {
        let g = generate(&Family::ShatterGadget { k: 4 }).unwrap();
        let ctx = EvalContext::new(&g, vec![], 0).unwrap();
        // Right vertex for J = {0, 2}: profile E N E N along the left side.
        let b = 4 + 0b0101;
        let f = decompose_sequence_types(&ctx, &[Atom::Edge], &[0, 1, 2, 3], b, Mode::Nip).unwrap().unwrap_err();
        assert_eq!(f.profile, vec![E, N, E, N]);
        assert!(decompose_sequence_types(&ctx, &[Atom::Edge], &[0], b, Mode::Nip).unwrap().is_ok());
    }
}
