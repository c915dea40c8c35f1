//! Local analysis: the data D(U,X) and K, verified local models
//! (G(U,X), H(U,X)), the C/K local groups, strongly normalized chains, the
//! intersection formula for C_S(E), the hyperfocal containments, Gross's
//! theorem, and the Theorem-B pipeline.

mod conjectures;
mod model;
mod pipeline;

pub use conjectures::{run_conjecture_52, run_conjecture_53, Conjecture52Report, Conjecture53Report};
pub use model::{local_datum, local_k_groups, local_model, LocalDatum, LocalKGroups, LocalModel};
pub use pipeline::{
    centralizer_subgroup_local, strongly_normalized_chain, verify_gross,
    verify_op_containment, verify_prop_hyp_containment, verify_theorem_b, Chain, ChainResult,
    GrossReport, HypContainmentReport, LocalCseReport, TheoremBReport,
};

use std::sync::Arc;

use crate::error::Result;
use crate::fusion::{FusionSystem, NormalPair};
use crate::group::{Elem, Subgroup};

/// Fully F-normalized, T-centric subgroups of T, in S-coordinates
/// (the family 𝒰 of the intersection formula).
pub fn centric_normalized_family(pair: &NormalPair) -> Vec<Subgroup> {
    let f = &pair.f;
    let t_sub = pair.t_sub();
    let lattice = f.lattice();
    let mut out = Vec::new();
    for id in 0..lattice.len() {
        let u = lattice.get(id);
        if !t_sub.contains_subgroup(u) {
            continue;
        }
        let status = f.classify_subgroup(u, Some(&t_sub));
        if status.fully_normalized && status.t_centric == Some(true) {
            out.push(u.clone());
        }
    }
    out
}

/// C_S(T) in S-coordinates.
pub fn centralizer_of_t(pair: &NormalPair) -> Subgroup {
    Subgroup::centralizer_in(&pair.f.full(), &pair.t_sub())
}

/// The realized centralizer system C_F(T) = F_{C_S(T)}(C_G(T)), returned
/// with the member list of C_S(T) in S-coordinates (index i of the returned
/// system's table corresponds to `members[i]`).
pub fn realized_cft(pair: &NormalPair) -> Result<(Arc<FusionSystem>, Vec<Elem>)> {
    let f = &pair.f;
    let (g, embed) = f
        .ambient_group()
        .ok_or_else(|| crate::error::Error::Precondition("realized pair required".into()))?;
    let t_in_g = Subgroup::from_members_unchecked(
        g,
        pair.t_in_s.iter().map(|&x| embed[x as usize]).collect(),
    );
    let c_g_t = Subgroup::centralizer_in(&g.full_subgroup(), &t_in_g);
    let (c_table, c_members) = c_g_t.as_group()?;
    let s_set: std::collections::BTreeSet<Elem> = embed.iter().copied().collect();
    let cs_in_c: Vec<Elem> = c_members
        .iter()
        .enumerate()
        .filter(|(_, g_idx)| s_set.contains(g_idx))
        .map(|(i, _)| i as Elem)
        .collect();
    let cs_sub = Subgroup::from_members_unchecked(&c_table, cs_in_c.clone());
    let system = FusionSystem::realized(&c_table, &cs_sub, f.prime(), *f.caps())?;
    // Index i of the system's table -> S-coordinate member.
    let members: Vec<Elem> = cs_in_c
        .iter()
        .map(|&ci| {
            let g_idx = c_members[ci as usize];
            embed.binary_search(&g_idx).expect("C_S(T) inside S") as Elem
        })
        .collect();
    Ok((Arc::new(system), members))
}
