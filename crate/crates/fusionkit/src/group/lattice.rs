//! Exhaustive subgroup enumeration for p-groups by layered extension.
//!
//! Every subgroup of order p^(k+1) of a p-group contains some order-p^k
//! subgroup as a normal subgroup of index p, so it arises as ⟨P, x⟩ for a
//! previously listed P and a normalizer element x with x^p ∈ P.  This keeps
//! the search inside N_S(P) instead of scanning all subsets.

use std::collections::HashMap;
use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::ops::p_part;
use crate::group::{Elem, GroupTable, Subgroup};

/// All subgroups of the p-group `s`, sorted by (order, member list).
pub fn subgroups_of_p_group(s: &Arc<GroupTable>, p: usize, caps: &Caps) -> Result<Vec<Subgroup>> {
    if s.order() != p_part(s.order(), p) {
        return Err(Error::Precondition(format!(
            "subgroup enumeration requires a p-group; |S| = {} is not a power of {}",
            s.order(),
            p
        )));
    }
    if s.order() > caps.max_subgroup_lattice {
        return Err(Error::CapExceeded {
            what: "subgroup-lattice group order",
            limit: caps.max_subgroup_lattice,
            actual: s.order(),
        });
    }
    let full = s.full_subgroup();
    let mut seen: HashMap<Arc<Vec<Elem>>, ()> = HashMap::new();
    let trivial = s.trivial_subgroup();
    let mut layers: Vec<Vec<Subgroup>> = vec![vec![trivial.clone()]];
    seen.insert(trivial.members_arc(), ());
    let mut all = vec![trivial];
    loop {
        let last = layers.last().expect("at least the trivial layer");
        let mut next: Vec<Subgroup> = Vec::new();
        for sub in last {
            let normalizer = Subgroup::normalizer_in(&full, sub);
            for &x in normalizer.members() {
                if sub.contains(x) {
                    continue;
                }
                let mut gens = sub.members().to_vec();
                gens.push(x);
                let ext = Subgroup::generated(s, &gens);
                if ext.order() != sub.order() * p {
                    continue;
                }
                if !seen.contains_key(&ext.members_arc()) {
                    seen.insert(ext.members_arc(), ());
                    next.push(ext);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        next.sort();
        all.extend(next.iter().cloned());
        layers.push(next);
    }
    all.sort();
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm;

    fn group_from_cycles(degree: usize, gens: &[&[Vec<usize>]]) -> Arc<GroupTable> {
        let perms: Vec<Perm> = gens
            .iter()
            .map(|cycles| Perm::from_cycles(degree, cycles).unwrap())
            .collect();
        GroupTable::from_permutations(&perms, 10_000).unwrap()
    }

    /// Oracle: subgroups of small groups by closing every subset of size ≤ 2
    /// (all subgroups of the groups used here are 2-generated).
    fn two_generated_subgroups(s: &Arc<GroupTable>) -> Vec<Subgroup> {
        let mut out: Vec<Subgroup> = Vec::new();
        for a in 0..s.order() as Elem {
            for b in a..s.order() as Elem {
                let sub = Subgroup::generated(s, &[a, b]);
                if !out.contains(&sub) {
                    out.push(sub);
                }
            }
        }
        let trivial = s.trivial_subgroup();
        if !out.contains(&trivial) {
            out.push(trivial);
        }
        out.sort();
        out
    }

    #[test]
    fn dihedral_8_lattice() {
        // Symmetries of the square: order 8, ten subgroups.
        let d8 = group_from_cycles(4, &[&[vec![0, 1, 2, 3]], &[vec![1, 3]]]);
        let subs = subgroups_of_p_group(&d8, 2, &Caps::default()).unwrap();
        assert_eq!(subs.len(), 10);
        assert_eq!(subs, two_generated_subgroups(&d8));
    }

    #[test]
    fn elementary_abelian_16_lattice() {
        // C2^4 has 1 + 15 + 35 + 15 + 1 = 67 subgroups.
        let e16 = group_from_cycles(
            8,
            &[
                &[vec![0, 1]],
                &[vec![2, 3]],
                &[vec![4, 5]],
                &[vec![6, 7]],
            ],
        );
        assert_eq!(e16.order(), 16);
        let subs = subgroups_of_p_group(&e16, 2, &Caps::default()).unwrap();
        assert_eq!(subs.len(), 67);
    }

    #[test]
    fn rejects_non_p_group() {
        let s3 = group_from_cycles(3, &[&[vec![0, 1, 2]], &[vec![0, 1]]]);
        assert!(subgroups_of_p_group(&s3, 2, &Caps::default()).is_err());
    }
}
