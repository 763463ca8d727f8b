//! Intermediate subalgebras `h < k < g` as bracket-closed index sets.
//!
//! With pairwise inequivalent summands, `k = (sum over J of m_i) + h` is a
//! subalgebra exactly when `[jkl] = 0` for all `j, k` in `J` and `l` outside.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index_set::IndexSet;
use crate::space::HomogeneousSpace;

/// Exhaustive enumeration visits `2^s` subsets.
pub const MAX_ENUMERATION_SUMMANDS: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubalgebraLattice {
    /// Every proper, non-empty, bracket-closed index set, in increasing
    /// bitmask order.
    pub all_proper: Vec<IndexSet>,
    /// The members of `all_proper` not strictly contained in another member.
    pub maximal: Vec<IndexSet>,
}

pub fn is_bracket_closed(space: &HomogeneousSpace, set: IndexSet) -> Result<bool> {
    space.check_set(set)?;
    Ok(closed_unchecked(space, set))
}

fn closed_unchecked(space: &HomogeneousSpace, set: IndexSet) -> bool {
    // exact zero test on the stored constants
    !space
        .constants()
        .ordered()
        .iter()
        .any(|t| set.contains(t.i) && set.contains(t.j) && !set.contains(t.k))
}

pub fn intermediate_subalgebras(space: &HomogeneousSpace) -> Result<SubalgebraLattice> {
    let s = space.num_summands();
    if s > MAX_ENUMERATION_SUMMANDS {
        return Err(Error::TooManySummands {
            s,
            limit: MAX_ENUMERATION_SUMMANDS,
        });
    }
    let full = space.full_set();
    let all_proper: Vec<IndexSet> = (1..full.bits())
        .map(IndexSet::from_bits)
        .filter(|&set| closed_unchecked(space, set))
        .collect();
    let maximal = maximal_members(&all_proper);
    Ok(SubalgebraLattice {
        all_proper,
        maximal,
    })
}

/// Bracket-closed, proper, non-empty subsets of `set` that are maximal under
/// inclusion.
pub fn maximal_within(space: &HomogeneousSpace, set: IndexSet) -> Result<Vec<IndexSet>> {
    if !is_bracket_closed(space, set)? {
        return Err(Error::NotClosed(set));
    }
    let members: Vec<usize> = set.iter().collect();
    if members.len() > MAX_ENUMERATION_SUMMANDS {
        return Err(Error::TooManySummands {
            s: members.len(),
            limit: MAX_ENUMERATION_SUMMANDS,
        });
    }
    let closed: Vec<IndexSet> = (1u32..(1 << members.len()) - 1)
        .map(|mask| {
            IndexSet::from_indices(
                members
                    .iter()
                    .enumerate()
                    .filter(|(n, _)| mask & (1 << n) != 0)
                    .map(|(_, &i)| i),
            )
        })
        .filter(|&sub| closed_unchecked(space, sub))
        .collect();
    Ok(maximal_members(&closed))
}

fn maximal_members(sets: &[IndexSet]) -> Vec<IndexSet> {
    sets.iter()
        .copied()
        .filter(|&a| !sets.iter().any(|&b| a.is_strict_subset_of(b)))
        .collect()
}
