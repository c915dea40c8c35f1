//! Subsystem constructors: restrictions, intersections, centralizer and
//! K-normalizer systems, the hyperfocal subgroup and subsystems of p-power
//! index.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{
    residual_subgroup, Elem, GroupTable, ResidualKind, Subgroup,
};

use super::centralizer::extends_fixing;
use super::system::{FusionSystem, Morphism, NormalPair, SubId};

/// The full subcategory of F on the subgroups of R, as an abstract system
/// on R's own table.
pub fn restrict_to_subgroup(f: &FusionSystem, r_sub: &Subgroup, validate: bool) -> Result<FusionSystem> {
    let (r_table, r_members) = r_sub.as_group()?;
    let to_r = |x: Elem| -> Elem {
        r_members
            .binary_search(&x)
            .expect("element outside the restriction subgroup") as Elem
    };
    let caps = *f.caps();
    let p = f.prime();
    let sub_lattice = crate::group::subgroups_of_p_group(&r_table, p, &caps)?;
    let mut homs: BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>> = BTreeMap::new();
    for (p_id, p_r) in sub_lattice.iter().enumerate() {
        let p_s = f.subgroup_from_members(p_r.members().iter().map(|&x| r_members[x as usize]).collect());
        for (q_id, q_r) in sub_lattice.iter().enumerate() {
            let q_s = f.subgroup_from_members(q_r.members().iter().map(|&x| r_members[x as usize]).collect());
            let set = f.hom_set(&p_s, &q_s);
            let translated: Vec<Morphism> = set
                .iter()
                .map(|m| {
                    Morphism::new(
                        p_r.members_arc(),
                        m.images().iter().map(|&x| to_r(x)).collect(),
                    )
                })
                .collect();
            if !translated.is_empty() {
                homs.insert((p_id, q_id), Arc::new(translated));
            }
        }
    }
    FusionSystem::abstract_system(r_table, p, caps, homs, validate)
}

/// Hom-set intersection of two systems on the same table; closure properties
/// are re-verified.
pub fn intersect_fusion_systems(f1: &FusionSystem, f2: &FusionSystem) -> Result<FusionSystem> {
    if f1.s_table() != f2.s_table() {
        return Err(Error::MismatchedUnderlying {
            context: "intersection of fusion systems".into(),
        });
    }
    let lattice = f1.lattice();
    let mut homs: BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>> = BTreeMap::new();
    for p_id in 0..lattice.len() {
        for q_id in 0..lattice.len() {
            let a = f1.hom_set(lattice.get(p_id), lattice.get(q_id));
            let b = f2.hom_set(lattice.get(p_id), lattice.get(q_id));
            let b_set: BTreeSet<&[Elem]> = b.iter().map(|m| m.images()).collect();
            let both: Vec<Morphism> = a
                .iter()
                .filter(|m| b_set.contains(m.images()))
                .cloned()
                .collect();
            if !both.is_empty() {
                homs.insert((p_id, q_id), Arc::new(both));
            }
        }
    }
    FusionSystem::abstract_system(
        Arc::clone(f1.s_table()),
        f1.prime(),
        *f1.caps(),
        homs,
        true,
    )
}

/// Result of `centralizer_system`: the system together with the fully
/// centralized conjugate of X actually used (reported when substituted).
pub struct CentralizerSystem {
    pub system: FusionSystem,
    /// Members (in S-coordinates) of the X actually used.
    pub x_used: Vec<Elem>,
    pub substituted: bool,
}

/// C_F(X) on C_S(X), by the extension characterization: φ: P → Q belongs
/// iff some ψ ∈ Hom_F(PX, QX) restricts to φ on P and to the identity on X.
/// If X is not fully centralized it is first replaced by a fully centralized
/// F-conjugate (smallest-first), and the substitution is reported.
pub fn centralizer_system(f: &FusionSystem, x_sub: &Subgroup) -> Result<CentralizerSystem> {
    let full = f.full();
    if !full.contains_subgroup(x_sub) {
        return Err(Error::Precondition("X is not a subgroup of S".into()));
    }
    let lattice = f.lattice();
    let class = f.f_class_of(x_sub);
    let c_order = |id: SubId| Subgroup::centralizer_in(&full, lattice.get(id)).order();
    let max_c = class.iter().map(|&i| c_order(i)).max().unwrap();
    let my_id = lattice.id_of(x_sub);
    let (x_used, substituted) = if c_order(my_id) == max_c {
        (x_sub.clone(), false)
    } else {
        let best = class
            .iter()
            .copied()
            .filter(|&i| c_order(i) == max_c)
            .min_by_key(|&i| lattice.get(i).members().to_vec())
            .unwrap();
        (lattice.get(best).clone(), true)
    };
    let c_s_x = Subgroup::centralizer_in(&full, &x_used);
    let (c_table, c_members) = c_s_x.as_group()?;
    let caps = *f.caps();
    let p = f.prime();
    let c_lattice = crate::group::subgroups_of_p_group(&c_table, p, &caps)?;
    let to_c = |x: Elem| -> Elem { c_members.binary_search(&x).expect("outside C_S(X)") as Elem };
    let mut homs: BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>> = BTreeMap::new();
    for (p_id, p_c) in c_lattice.iter().enumerate() {
        let p_s = f.subgroup_from_members(p_c.members().iter().map(|&x| c_members[x as usize]).collect());
        let px = p_s.product(&x_used);
        for (q_id, q_c) in c_lattice.iter().enumerate() {
            let q_s = f.subgroup_from_members(q_c.members().iter().map(|&x| c_members[x as usize]).collect());
            let qx = q_s.product(&x_used);
            let mut tuples: BTreeSet<Vec<Elem>> = BTreeSet::new();
            for psi in f.hom_set(&px, &qx).iter() {
                if x_used.members().iter().any(|&x| psi.apply(x) != x) {
                    continue;
                }
                if p_s.members().iter().any(|&x| !q_s.contains(psi.apply(x))) {
                    continue;
                }
                tuples.insert(p_s.members().iter().map(|&x| to_c(psi.apply(x))).collect());
            }
            let set: Vec<Morphism> = tuples
                .into_iter()
                .map(|images| Morphism::new(p_c.members_arc(), images))
                .collect();
            if !set.is_empty() {
                homs.insert((p_id, q_id), Arc::new(set));
            }
        }
    }
    let system = FusionSystem::abstract_system(c_table, p, caps, homs, false)?;
    Ok(CentralizerSystem {
        system,
        x_used: x_used.members().to_vec(),
        substituted,
    })
}

/// N_F^K(R) on N_S^K(R) = {s ∈ N_S(R) : c_s|_R ∈ K}.  A morphism φ: P → Q
/// belongs iff it extends to φ̄ ∈ Hom_F(PR, QR) with φ̄(R) = R and φ̄|_R ∈ K.
/// K must be composition-closed (a subgroup of Aut_F(R)).
pub fn k_normalizer_system(
    f: &FusionSystem,
    r_sub: &Subgroup,
    k: &[Morphism],
) -> Result<FusionSystem> {
    // K closure check.
    let k_tuples: BTreeSet<&[Elem]> = k.iter().map(|m| m.images()).collect();
    if !k_tuples.contains(r_sub.members()) {
        return Err(Error::Precondition("K misses the identity automorphism".into()));
    }
    for a in k {
        for b in k {
            if !k_tuples.contains(&a.then(b).images()[..]) {
                return Err(Error::Precondition("K is not closed under composition".into()));
            }
        }
    }
    let aut_r = f.aut_f(r_sub);
    let aut_tuples: BTreeSet<&[Elem]> = aut_r.iter().map(|m| m.images()).collect();
    if k.iter().any(|m| !aut_tuples.contains(m.images())) {
        return Err(Error::Precondition("K is not contained in Aut_F(R)".into()));
    }

    let full = f.full();
    let n_s_r = Subgroup::normalizer_in(&full, r_sub);
    let n_members: Vec<Elem> = n_s_r
        .members()
        .iter()
        .copied()
        .filter(|&s| {
            let conj = Morphism::conjugation(r_sub, s);
            k_tuples.contains(&conj.images()[..])
        })
        .collect();
    let n_sub = f.subgroup_from_members(n_members);
    let (n_table, n_in_s) = n_sub.as_group()?;
    let caps = *f.caps();
    let p = f.prime();
    let n_lattice = crate::group::subgroups_of_p_group(&n_table, p, &caps)?;
    let to_n = |x: Elem| -> Elem { n_in_s.binary_search(&x).expect("outside N_S^K(R)") as Elem };
    let mut homs: BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>> = BTreeMap::new();
    for (p_id, p_n) in n_lattice.iter().enumerate() {
        let p_s = f.subgroup_from_members(p_n.members().iter().map(|&x| n_in_s[x as usize]).collect());
        let pr = p_s.product(r_sub);
        for (q_id, q_n) in n_lattice.iter().enumerate() {
            let q_s = f.subgroup_from_members(q_n.members().iter().map(|&x| n_in_s[x as usize]).collect());
            let qr = q_s.product(r_sub);
            let mut tuples: BTreeSet<Vec<Elem>> = BTreeSet::new();
            for psi in f.hom_set(&pr, &qr).iter() {
                // φ̄(R) = R with φ̄|_R ∈ K.
                let r_images: Vec<Elem> = r_sub.members().iter().map(|&x| psi.apply(x)).collect();
                let mut sorted = r_images.clone();
                sorted.sort_unstable();
                if sorted != *r_sub.members() || !k_tuples.contains(&r_images[..]) {
                    continue;
                }
                if p_s.members().iter().any(|&x| !q_s.contains(psi.apply(x))) {
                    continue;
                }
                tuples.insert(p_s.members().iter().map(|&x| to_n(psi.apply(x))).collect());
            }
            let set: Vec<Morphism> = tuples
                .into_iter()
                .map(|images| Morphism::new(p_n.members_arc(), images))
                .collect();
            if !set.is_empty() {
                homs.insert((p_id, q_id), Arc::new(set));
            }
        }
    }
    FusionSystem::abstract_system(n_table, p, caps, homs, false)
}

/// hyp(F) = ⟨ g⁻¹·gα  |  g ∈ P ≤ S, α ∈ O^p(Aut_F(P)) ⟩.
pub fn hyperfocal(f: &FusionSystem) -> Result<Subgroup> {
    let lattice = f.lattice();
    let s = f.s_table();
    let mut gens: BTreeSet<Elem> = BTreeSet::new();
    for p_id in 0..lattice.len() {
        let p_sub = lattice.get(p_id);
        if p_sub.is_trivial() {
            continue;
        }
        let auts = f.aut_f(p_sub);
        let (aut_table, aut_morphs) = morphisms_as_group(&auts)?;
        let op = residual_subgroup(&aut_table, f.prime(), ResidualKind::OpUpper);
        for &a in op.members() {
            let alpha = &aut_morphs[a as usize];
            for &g in p_sub.members() {
                gens.insert(s.mul(s.inv(g), alpha.apply(g)));
            }
        }
    }
    let gen_vec: Vec<Elem> = gens.into_iter().collect();
    Ok(Subgroup::generated(s, &gen_vec))
}

/// The independent realized-route value: S ∩ O^p(G) (the hyperfocal subgroup
/// theorem).  Only available for realized systems.
pub fn hyperfocal_realized_oracle(f: &FusionSystem) -> Option<Subgroup> {
    let (g_table, embed) = f.ambient_group()?;
    let op = residual_subgroup(g_table, f.prime(), ResidualKind::OpUpper);
    let members: Vec<Elem> = (0..f.s_table().order() as Elem)
        .filter(|&x| op.contains(embed[x as usize]))
        .collect();
    Some(f.subgroup_from_members(members))
}

/// Materializes a morphism set (all endomorphisms of one subgroup) as a
/// group table; element i of the table is `morphs[i]`, sorted by image
/// tuple, so the identity automorphism is element 0.
pub fn morphisms_as_group(set: &[Morphism]) -> Result<(Arc<GroupTable>, Vec<Morphism>)> {
    let mut morphs: Vec<Morphism> = set.to_vec();
    morphs.sort_by(|a, b| a.images().cmp(b.images()));
    let index: BTreeMap<&[Elem], usize> = morphs
        .iter()
        .enumerate()
        .map(|(i, m)| (m.images(), i))
        .collect();
    let k = morphs.len();
    let mut rows = vec![vec![0usize; k]; k];
    for a in 0..k {
        for b in 0..k {
            let comp = morphs[a].then(&morphs[b]);
            rows[a][b] = *index
                .get(&comp.images()[..])
                .ok_or_else(|| Error::Precondition("morphism set not composition-closed".into()))?;
        }
    }
    let table = GroupTable::from_table(rows)?;
    Ok((table, morphs))
}

/// The subsystem of p-power index on R: generated on R by Inn(R) and all
/// restrictions of O^p(Aut_F(P)) for P ≤ R, closed under composition,
/// restriction and inverses.  Requires hyp(F) ≤ R; the output is verified
/// saturated and to satisfy Aut_{F_R}(P) ⊇ O^p(Aut_F(P)).
pub fn p_power_index_subsystem(f: &FusionSystem, r_sub: &Subgroup) -> Result<FusionSystem> {
    let hyp = hyperfocal(f)?;
    if !r_sub.contains_subgroup(&hyp) {
        return Err(Error::Precondition(format!(
            "R (order {}) does not contain hyp(F) (order {})",
            r_sub.order(),
            hyp.order()
        )));
    }
    let (r_table, r_members) = r_sub.as_group()?;
    let caps = *f.caps();
    let p = f.prime();
    let r_lattice = crate::group::subgroups_of_p_group(&r_table, p, &caps)?;
    let to_r = |x: Elem| -> Elem { r_members.binary_search(&x).expect("outside R") as Elem };

    // Generators, indexed by source subgroup id in R's lattice: image tuples.
    let mut sets: Vec<BTreeSet<Vec<Elem>>> = vec![BTreeSet::new(); r_lattice.len()];
    let r_id_of = |sub: &Subgroup| -> SubId {
        r_lattice
            .binary_search(sub)
            .expect("subgroup missing from R lattice")
    };
    for (p_id, p_r) in r_lattice.iter().enumerate() {
        // Inn(R) restrictions.
        for x in 0..r_table.order() as Elem {
            sets[p_id].insert(p_r.members().iter().map(|&m| r_table.conj(m, x)).collect());
        }
        if p_r.is_trivial() {
            continue;
        }
        // O^p(Aut_F(P)) in S-coordinates, restricted to R-coordinates.
        let p_s = f.subgroup_from_members(p_r.members().iter().map(|&x| r_members[x as usize]).collect());
        let auts = f.aut_f(&p_s);
        let (aut_table, aut_morphs) = morphisms_as_group(&auts)?;
        let op = residual_subgroup(&aut_table, p, ResidualKind::OpUpper);
        for &a in op.members() {
            let alpha = &aut_morphs[a as usize];
            sets[p_id].insert(p_r.members().iter().map(|&x| to_r(alpha.apply(r_members[x as usize]))).collect());
        }
    }

    // Closure under restriction, inverse-of-iso and composition.
    loop {
        let mut grew = false;
        for p_id in 0..r_lattice.len() {
            let p_r = r_lattice[p_id].clone();
            let current: Vec<Vec<Elem>> = sets[p_id].iter().cloned().collect();
            for images in current {
                // Restriction to maximal subgroups (transitivity reaches the rest).
                for (sub_id, sub) in r_lattice.iter().enumerate() {
                    if sub.order() * p as usize == p_r.order() && p_r.contains_subgroup(sub) {
                        let restricted: Vec<Elem> = sub
                            .members()
                            .iter()
                            .map(|&x| {
                                let pos = p_r.members().binary_search(&x).unwrap();
                                images[pos]
                            })
                            .collect();
                        if sets[sub_id].insert(restricted) {
                            grew = true;
                        }
                    }
                }
                // Inverse (all these maps are isos onto their image).
                let mut pairs: Vec<(Elem, Elem)> = p_r
                    .members()
                    .iter()
                    .copied()
                    .zip(images.iter().copied())
                    .map(|(a, b)| (b, a))
                    .collect();
                pairs.sort_unstable();
                let img_sub = Subgroup::from_members_unchecked(&r_table, pairs.iter().map(|&(a, _)| a).collect());
                let img_id = r_id_of(&img_sub);
                let inv_images: Vec<Elem> = pairs.iter().map(|&(_, b)| b).collect();
                if sets[img_id].insert(inv_images) {
                    grew = true;
                }
                // Composition with everything defined on the image.
                let img_members: Vec<Elem> = {
                    let mut v = images.clone();
                    v.sort_unstable();
                    v
                };
                for (q_id, q_r) in r_lattice.iter().enumerate() {
                    if !img_members.iter().all(|x| q_r.contains(*x)) {
                        continue;
                    }
                    let next: Vec<Vec<Elem>> = sets[q_id].iter().cloned().collect();
                    for psi_images in next {
                        let composed: Vec<Elem> = images
                            .iter()
                            .map(|&x| {
                                let pos = q_r.members().binary_search(&x).unwrap();
                                psi_images[pos]
                            })
                            .collect();
                        if sets[p_id].insert(composed) {
                            grew = true;
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }

    // Package as complete per-pair tables.
    let mut homs: BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>> = BTreeMap::new();
    for (p_id, p_r) in r_lattice.iter().enumerate() {
        for (q_id, q_r) in r_lattice.iter().enumerate() {
            let set: Vec<Morphism> = sets[p_id]
                .iter()
                .filter(|images| images.iter().all(|x| q_r.contains(*x)))
                .map(|images| Morphism::new(p_r.members_arc(), images.clone()))
                .collect();
            if !set.is_empty() {
                homs.insert((p_id, q_id), Arc::new(set));
            }
        }
    }
    let out = FusionSystem::abstract_system(r_table, p, caps, homs, false)?;

    // Index property: Aut_{F_R}(P) ⊇ O^p(Aut_F(P)) for all P ≤ R.
    for p_r in r_lattice.iter() {
        if p_r.is_trivial() {
            continue;
        }
        let p_s = f.subgroup_from_members(p_r.members().iter().map(|&x| r_members[x as usize]).collect());
        let auts = f.aut_f(&p_s);
        let (aut_table, aut_morphs) = morphisms_as_group(&auts)?;
        let op = residual_subgroup(&aut_table, p, ResidualKind::OpUpper);
        let out_auts = out.aut_f(p_r);
        for &a in op.members() {
            let alpha = &aut_morphs[a as usize];
            let in_r: Vec<Elem> = p_r.members().iter().map(|&x| to_r(alpha.apply(r_members[x as usize]))).collect();
            if !out_auts.iter().any(|m| m.images() == in_r) {
                return Err(Error::ModelVerification {
                    axiom: "p-power-index property",
                    detail: "O^p(Aut_F(P)) escapes the generated subsystem".into(),
                });
            }
        }
    }
    let sat = out.is_saturated();
    if !sat.saturated {
        return Err(Error::ModelVerification {
            axiom: "saturation of p-power-index subsystem",
            detail: format!("failing class {:?}", sat.failing_class),
        });
    }
    Ok(out)
}

/// Containment of a subsystem: every hom of `e` (translated along `t_in_s`)
/// lies in the corresponding hom-set of `big`.
pub fn subsystem_contains(big: &FusionSystem, e: &FusionSystem, t_in_s: &[Elem]) -> bool {
    let lattice = e.lattice();
    for p_id in 0..lattice.len() {
        for q_id in 0..lattice.len() {
            let set = e.hom_set(lattice.get(p_id), lattice.get(q_id));
            if set.is_empty() {
                continue;
            }
            let p_s = big.subgroup_from_members(
                lattice.get(p_id).members().iter().map(|&x| t_in_s[x as usize]).collect(),
            );
            let q_s = big.subgroup_from_members(
                lattice.get(q_id).members().iter().map(|&x| t_in_s[x as usize]).collect(),
            );
            let big_set = big.hom_set(&p_s, &q_s);
            for m in set.iter() {
                let translated: Vec<Elem> = m.images().iter().map(|&x| t_in_s[x as usize]).collect();
                if !big_set.iter().any(|bm| bm.images() == translated) {
                    return false;
                }
            }
        }
    }
    true
}

/// E ⊆ C_F(X), tested morphism-by-morphism through the extension rule
/// without materializing C_F(X).  T must lie inside C_S(X) for the objects
/// of E to be objects of C_F(X) at all.
pub fn subsystem_in_centralizer(pair: &NormalPair, x_sub: &Subgroup) -> bool {
    let f = &pair.f;
    let t_sub = pair.t_sub();
    let s = f.s_table();
    let commute = t_sub
        .members()
        .iter()
        .all(|&t| x_sub.members().iter().all(|&x| s.mul(t, x) == s.mul(x, t)));
    if !commute {
        return false;
    }
    let morphisms = pair.e_morphisms_in_s();
    for (p_sub, q_sub, maps) in &morphisms {
        let domain = p_sub.join(x_sub);
        let target = q_sub.join(x_sub);
        for phi in maps {
            if !extends_fixing(f, phi, &domain, &target, x_sub.members()) {
                return false;
            }
        }
    }
    true
}
