//! The direct computation of C_S(E) = {g ∈ S | E ⊆ C_F(⟨g⟩)} and the center
//! Z(F) as its E = F specialization.
//!
//! Membership of g is tested through the extension characterization: every
//! E-morphism φ: P → Q must admit ψ ∈ Hom_F(⟨P,g⟩, ⟨Q,g⟩) with ψ|_P = φ and
//! gψ = g.  This is used even when ⟨g⟩ is not fully centralized (the raw
//! definition does not require it); such elements are flagged in the result.

use rayon::prelude::*;
use std::sync::Arc;

use crate::group::{Elem, Subgroup};

use super::system::{FusionSystem, Morphism, NormalPair};

#[derive(Debug, Clone)]
pub struct CentralizerSet {
    /// Sorted member list (S-element indices).
    pub members: Vec<Elem>,
    /// Closure test verdict for the raw set.
    pub is_subgroup: bool,
    /// Members g whose ⟨g⟩ is not fully centralized in F; the membership
    /// rule for these is a definitional choice, so reports flag them.
    pub not_fully_centralized: Vec<Elem>,
}

impl CentralizerSet {
    pub fn as_subgroup(&self, f: &FusionSystem) -> Option<Subgroup> {
        self.is_subgroup
            .then(|| f.subgroup_from_members(self.members.clone()))
    }
}

/// Does every morphism in `morphisms` (S-coordinates, grouped with its
/// source/target) extend inside F to a map fixing `g`?
fn element_is_centralizing(
    f: &FusionSystem,
    morphisms: &[(Subgroup, Subgroup, Vec<Morphism>)],
    g: Elem,
) -> bool {
    if g == f.s_table().identity() {
        return true;
    }
    for (p_sub, q_sub, maps) in morphisms {
        let domain = p_sub.join(&f.subgroup_from_members(vec![g]));
        let target = q_sub.join(&f.subgroup_from_members(vec![g]));
        for phi in maps {
            if !extends_fixing(f, phi, &domain, &target, &[g]) {
                return false;
            }
        }
    }
    true
}

/// ∃ψ ∈ Hom_F(domain, target) with ψ|_src = φ and ψ fixing `fixed` pointwise.
pub(crate) fn extends_fixing(
    f: &FusionSystem,
    phi: &Morphism,
    domain: &Subgroup,
    target: &Subgroup,
    fixed: &[Elem],
) -> bool {
    if let Some((g_table, embed)) = f.ambient_group() {
        // ψ = c_k for k fixing `fixed` and restricting to φ; the image of the
        // domain then lands in the target automatically.
        let src_g: Vec<Elem> = phi
            .source_members()
            .iter()
            .map(|&x| embed[x as usize])
            .collect();
        let img_g: Vec<Elem> = phi.images().iter().map(|&x| embed[x as usize]).collect();
        let fixed_g: Vec<Elem> = fixed.iter().map(|&x| embed[x as usize]).collect();
        let n = g_table.order() as Elem;
        (0..n).into_par_iter().any(|k| {
            fixed_g.iter().all(|&x| g_table.conj(x, k) == x)
                && src_g
                    .iter()
                    .zip(img_g.iter())
                    .all(|(&x, &y)| g_table.conj(x, k) == y)
        })
    } else {
        f.hom_set(domain, target).iter().any(|psi| {
            fixed.iter().all(|&x| psi.apply(x) == x)
                && phi
                    .source_members()
                    .iter()
                    .all(|&x| psi.apply(x) == phi.apply(x))
        })
    }
}

/// The set {g ∈ S | E ⊆ C_F(⟨g⟩)} with its subgroup flag.  Callable on any
/// pair; for merely invariant pairs the set can fail to be a subgroup.
///
/// Containment of E in C_F(⟨g⟩) asks for E's objects to be objects of
/// C_F(⟨g⟩) in the first place, i.e. T ≤ C_S(⟨g⟩); membership therefore
/// quantifies over g ∈ C_S(T) and then applies the extension rule.
pub fn centralizer_subgroup_direct(pair: &NormalPair) -> CentralizerSet {
    // Larger sources first: a failing extension is usually found at the top.
    let mut morphisms = pair.e_morphisms_in_s();
    morphisms.sort_by_key(|(p, _, _)| usize::MAX - p.order());
    let f = &pair.f;
    let c_s_t = Subgroup::centralizer_in(&f.full(), &pair.t_sub());
    let members: Vec<Elem> = c_s_t
        .members()
        .par_iter()
        .copied()
        .filter(|&g| element_is_centralizing(f, &morphisms, g))
        .collect();
    finish_set(f, members)
}

/// Z(F): the E = F specialization.  Candidates are confined to Z(S), which
/// the inner automorphisms of S force anyway.
pub fn center_of_fusion_system(f: &Arc<FusionSystem>) -> CentralizerSet {
    let z_s = f.s_table().center();
    let lattice = f.lattice();
    let mut pair_ids: Vec<(usize, usize)> = Vec::new();
    for p_id in 0..lattice.len() {
        for q_id in 0..lattice.len() {
            pair_ids.push((p_id, q_id));
        }
    }
    pair_ids.sort_by_key(|&(p, _)| usize::MAX - lattice.get(p).order());
    let members: Vec<Elem> = z_s
        .members()
        .par_iter()
        .copied()
        .filter(|&g| {
            if g == f.s_table().identity() {
                return true;
            }
            pair_ids.iter().all(|&(p_id, q_id)| {
                let p_sub = lattice.get(p_id);
                let q_sub = lattice.get(q_id);
                let maps = f.hom_set(p_sub, q_sub);
                if maps.is_empty() {
                    return true;
                }
                let g_sub = f.subgroup_from_members(vec![g]);
                let domain = p_sub.join(&g_sub);
                let target = q_sub.join(&g_sub);
                maps.iter()
                    .all(|phi| extends_fixing(f, phi, &domain, &target, &[g]))
            })
        })
        .collect();
    finish_set(f, members)
}

fn finish_set(f: &FusionSystem, mut members: Vec<Elem>) -> CentralizerSet {
    members.sort_unstable();
    let s = f.s_table();
    let is_subgroup = members.iter().all(|&a| {
        members
            .iter()
            .all(|&b| members.binary_search(&s.mul(a, b)).is_ok())
    });
    let full = f.full();
    let not_fully_centralized = members
        .iter()
        .copied()
        .filter(|&g| {
            if g == s.identity() {
                return false;
            }
            let cyc = Subgroup::generated(s, &[g]);
            let c_order = Subgroup::centralizer_in(&full, &cyc).order();
            f.f_class_of(&cyc).iter().any(|&other| {
                let o = f.lattice().get(other).clone();
                Subgroup::centralizer_in(&full, &o).order() > c_order
            })
        })
        .collect();
    CentralizerSet {
        members,
        is_subgroup,
        not_fully_centralized,
    }
}
