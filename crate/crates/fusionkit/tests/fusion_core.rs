//! Fusion-system behavior against hand-derived values on the small catalog:
//! hom-set counts verified by transporter/centralizer quotients, subsystem
//! constructions checked against their realized counterparts.

use std::sync::Arc;

use fusionkit::caps::Caps;
use fusionkit::catalog::{build_group, build_pair, realized_normal_pair, realized_system_for};
use fusionkit::fusion::{
    center_of_fusion_system, centralizer_subgroup_direct, centralizer_system, hyperfocal,
    hyperfocal_realized_oracle, intersect_fusion_systems, k_normalizer_system,
    p_power_index_subsystem, FusionSystem, Morphism, NormalPair, NormalityLevel,
};
use fusionkit::group::{sylow_subgroup, Elem, Subgroup};

fn caps() -> Caps {
    Caps::default()
}

/// F_{D_8}(S_4) together with the double-transposition Klein subgroup in
/// S-coordinates.
fn f_s4() -> (Arc<FusionSystem>, Subgroup) {
    let f = realized_system_for("sym:4", 2, &caps()).unwrap();
    let v4 = klein_in(&f);
    (f, v4)
}

/// The Klein subgroup of double transpositions, in S-coordinates of a
/// 2-Sylow system on 4 points.
fn klein_in(f: &FusionSystem) -> Subgroup {
    let members: Vec<Elem> = (0..f.s_table().order() as Elem)
        .filter(|&x| {
            let perm = f.s_table().perm(x).unwrap();
            perm.is_identity() || perm.cycles().len() == 2
        })
        .filter(|&x| {
            let perm = f.s_table().perm(x).unwrap();
            perm.is_identity() || perm.cycles().iter().all(|c| c.len() == 2)
        })
        .collect();
    let sub = f.subgroup_from_members(members);
    assert_eq!(sub.order(), 4);
    sub
}

#[test]
fn hom_set_counts() {
    let (f, v4) = f_s4();
    // Aut_F(V_4) = N_{S_4}(V_4)/C_{S_4}(V_4) = 24/4 = 6.
    assert_eq!(f.aut_f(&v4).len(), 6);

    // The trivial subgroup has exactly one morphism into any Q.
    let trivial = f.subgroup_from_members(vec![0]);
    let full = f.full();
    assert_eq!(f.hom_set(&trivial, &full).len(), 1);
    assert_eq!(f.hom_set(&trivial, &v4).len(), 1);

    // F_{V_4}(A_4): Aut_F(V_4) = A_4/V_4 of order 3.
    let fa4 = realized_system_for("alt:4", 2, &caps()).unwrap();
    assert_eq!(fa4.aut_f(&fa4.full()).len(), 3);

    // Realized divisibility: |Hom(P, S)| = |T_G(P,S)| / |C_G(P)|.
    let (g, embed) = f.ambient_group().unwrap();
    for p_sub in [v4.clone(), trivial.clone(), full.clone()] {
        let p_g: Vec<Elem> = p_sub.members().iter().map(|&x| embed[x as usize]).collect();
        let s_g: Vec<Elem> = full.members().iter().map(|&x| embed[x as usize]).collect();
        let s_set: std::collections::BTreeSet<Elem> = s_g.iter().copied().collect();
        let transporter = (0..g.order() as Elem)
            .filter(|&k| p_g.iter().all(|&x| s_set.contains(&g.conj(x, k))))
            .count();
        let centralizer = (0..g.order() as Elem)
            .filter(|&k| p_g.iter().all(|&x| g.conj(x, k) == x))
            .count();
        assert_eq!(f.hom_set(&p_sub, &full).len(), transporter / centralizer);
    }
}

#[test]
fn classification_flags() {
    let (f, v4) = f_s4();
    let status = f.classify_subgroup(&v4, None);
    assert!(status.fully_normalized);
    assert!(status.fully_automized); // Aut_S(V_4) of order 2 is Sylow in order 6.
    assert!(status.f_centric);

    let full = f.full();
    let status_s = f.classify_subgroup(&full, None);
    assert!(status_s.fully_normalized);
    assert!(status_s.fully_centralized);

    let fa4 = realized_system_for("alt:4", 2, &caps()).unwrap();
    let t = fa4.full();
    let status_t = fa4.classify_subgroup(&t, Some(&t));
    assert_eq!(status_t.t_centric, Some(true));
}

#[test]
fn saturation_of_realized_systems() {
    let (f, _) = f_s4();
    assert!(f.is_saturated().saturated);

    // Inner fusion on a p-group is saturated.
    let d8 = realized_system_for("dihedral:8", 2, &caps()).unwrap();
    assert!(d8.is_saturated().saturated);
}

#[test]
fn strong_closure() {
    let (f, v4) = f_s4();
    assert!(f.is_strongly_closed(&v4));
    assert!(f.is_strongly_closed(&f.full()));
    // A transposition inside D_8 fuses to the other reflection class.
    let transposition = (0..f.s_table().order() as Elem)
        .find(|&x| {
            let perm = f.s_table().perm(x).unwrap();
            perm.cycles().len() == 1 && perm.cycles()[0].len() == 2
        })
        .unwrap();
    let sub = Subgroup::generated(f.s_table(), &[transposition]);
    assert!(!f.is_strongly_closed(&sub));
}

#[test]
fn normality_levels() {
    // (F_{D_8}(S_4), F_{V_4}(A_4)) is a normal pair.
    let gp = build_pair("pair:(sym:4, alt:4, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    assert_eq!(pair.level, NormalityLevel::Normal);

    // (F, F) is normal.
    let gp2 = build_pair("pair:(sym:4, sym:4, 2)", &caps()).unwrap();
    let pair2 = realized_normal_pair(&gp2, &caps()).unwrap();
    assert_eq!(pair2.level, NormalityLevel::Normal);
}

#[test]
fn centralizer_system_examples() {
    let (f, _) = f_s4();
    // X = Z(D_8): C_{S_4}(Z) = D_8, so C_F(Z) = F_{D_8}(D_8).
    let z = f.s_table().center();
    assert_eq!(z.order(), 2);
    let cfz = centralizer_system(&f, &z).unwrap();
    assert!(!cfz.substituted);
    assert_eq!(cfz.system.s_table().order(), 8);
    let inner = FusionSystem::realized(f.s_table(), &f.full(), 2, caps()).unwrap();
    assert!(cfz.system.hom_equal(&inner).unwrap());

    // X = 1: C_F(1) = F.
    let trivial = f.subgroup_from_members(vec![0]);
    let cf1 = centralizer_system(&f, &trivial).unwrap();
    assert!(cf1.system.hom_equal(&f).unwrap());

    // Realized cross-check: C_F(X) = F_{C_S(X)}(C_G(X)) hom-set by hom-set.
    let (g, embed) = f.ambient_group().unwrap();
    let z_g: Vec<Elem> = z.members().iter().map(|&x| embed[x as usize]).collect();
    let c_g = Subgroup::centralizer_in(
        &g.full_subgroup(),
        &Subgroup::from_members_unchecked(g, z_g),
    );
    let (c_table, c_members) = c_g.as_group().unwrap();
    let full_s: std::collections::BTreeSet<Elem> = embed.iter().copied().collect();
    let cs_in_c: Vec<Elem> = c_members
        .iter()
        .enumerate()
        .filter(|(_, &g_idx)| full_s.contains(&g_idx))
        .map(|(i, _)| i as Elem)
        .collect();
    let realized_route = FusionSystem::realized(
        &c_table,
        &Subgroup::from_members_unchecked(&c_table, cs_in_c),
        2,
        caps(),
    )
    .unwrap();
    assert!(cfz.system.hom_equal(&realized_route).unwrap());
}

#[test]
fn k_normalizer_specializations() {
    let (f, v4) = f_s4();
    // K = Aut_F(V_4): N_F(V_4) = F since N_{S_4}(V_4) = S_4.
    let aut: Vec<Morphism> = f.aut_f(&v4).to_vec();
    let n_sys = k_normalizer_system(&f, &v4, &aut).unwrap();
    assert_eq!(n_sys.s_table().order(), 8);
    assert!(n_sys.hom_equal(&f).unwrap());

    // K = {id}: the centralizer system.
    let id_only = vec![Morphism::identity(&v4)];
    let c_sys = k_normalizer_system(&f, &v4, &id_only).unwrap();
    let c_direct = centralizer_system(&f, &v4).unwrap();
    assert_eq!(c_sys.s_table().order(), c_direct.system.s_table().order());
    assert!(c_sys.hom_equal(&c_direct.system).unwrap());

    // Rejects a K that is not composition-closed: {id, α} for α of order 3.
    let order3 = f
        .aut_f(&v4)
        .iter()
        .find(|m| !m.is_identity_map() && !m.then(m).is_identity_map())
        .cloned()
        .unwrap();
    let bad_k = vec![Morphism::identity(&v4), order3];
    assert!(k_normalizer_system(&f, &v4, &bad_k).is_err());
}

#[test]
fn intersection_identities() {
    let (f, _) = f_s4();
    // Intersecting two copies of the realized homs on the same table: F ∩ F = F.
    // The realized system is re-expressed on its own S-table via the inner
    // system for the table-equality precondition.
    let inner = FusionSystem::realized(f.s_table(), &f.full(), 2, caps()).unwrap();
    let both = intersect_fusion_systems(&inner, &inner).unwrap();
    assert!(both.hom_equal(&inner).unwrap());

    // F_S(S) ∩ F = F_S(S): inner fusion is minimal.
    // (inner vs f share the same S-table here, so intersect directly.)
    let f_on_table = {
        // Express F's hom-sets as an abstract system on the same table by
        // restriction to the full subgroup.
        fusionkit::fusion::restrict_to_subgroup(&f, &f.full(), false).unwrap()
    };
    let meet = intersect_fusion_systems(&f_on_table, &inner).unwrap();
    assert!(meet.hom_equal(&inner).unwrap());
}

#[test]
fn direct_centralizer_sets() {
    // (F_{D_8}(S_4), F_{V_4}(A_4)): C_S(E) = 1.
    let gp = build_pair("pair:(sym:4, alt:4, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    let set = centralizer_subgroup_direct(&pair);
    assert_eq!(set.members, vec![0]);
    assert!(set.is_subgroup);

    // E = F_T(T) for T = C_4 ⊴ D_8 inner: C_S(E) = C_S(T) = C_4.
    let gp2 = build_pair("pair:(dihedral:8, cyclic:4, 2)", &caps()).unwrap();
    let pair2 = realized_normal_pair(&gp2, &caps()).unwrap();
    let set2 = centralizer_subgroup_direct(&pair2);
    let t_sub = pair2.t_sub();
    let c_s_t = Subgroup::centralizer_in(&pair2.f.full(), &t_sub);
    assert_eq!(set2.members, c_s_t.members().to_vec());
    assert!(set2.is_subgroup);

    // (F, F): the set is Z(F).
    let gp3 = build_pair("pair:(sym:4, sym:4, 2)", &caps()).unwrap();
    let pair3 = realized_normal_pair(&gp3, &caps()).unwrap();
    let set3 = centralizer_subgroup_direct(&pair3);
    let z = center_of_fusion_system(&pair3.f);
    assert_eq!(set3.members, z.members);
}

#[test]
fn hyperfocal_examples() {
    // hyp(F_{D_8}(S_4)) = V_4 = D_8 ∩ A_4.
    let (f, v4) = f_s4();
    let hyp = hyperfocal(&f).unwrap();
    assert_eq!(hyp, v4);
    assert_eq!(hyp, hyperfocal_realized_oracle(&f).unwrap());

    // Inner fusion: hyp = 1.
    let d8 = realized_system_for("dihedral:8", 2, &caps()).unwrap();
    assert!(hyperfocal(&d8).unwrap().is_trivial());
    assert!(hyperfocal_realized_oracle(&d8).unwrap().is_trivial());

    // F_{V_4}(A_4): hyp = V_4 (O^2(A_4) = A_4).
    let fa4 = realized_system_for("alt:4", 2, &caps()).unwrap();
    assert_eq!(hyperfocal(&fa4).unwrap().order(), 4);
    assert_eq!(hyperfocal_realized_oracle(&fa4).unwrap().order(), 4);
}

#[test]
fn p_power_index_examples() {
    let (f, v4) = f_s4();
    // R = S: the subsystem is F itself.
    let full_sys = p_power_index_subsystem(&f, &f.full()).unwrap();
    let inner_f = fusionkit::fusion::restrict_to_subgroup(&f, &f.full(), false).unwrap();
    assert!(full_sys.hom_equal(&inner_f).unwrap());

    // R = V_4 = hyp(F): the subsystem is F_{V_4}(A_4).
    let sub = p_power_index_subsystem(&f, &v4).unwrap();
    let fa4 = realized_system_for("alt:4", 2, &caps()).unwrap();
    assert!(sub.hom_equal(&fa4).unwrap());
    assert!(sub.is_saturated().saturated);

    // Minimality at R = hyp: the O^p-generated system on hyp(E) is E itself.
    let e_again = p_power_index_subsystem(&fa4, &fa4.full()).unwrap();
    assert!(e_again.hom_equal(&fa4).unwrap());

    // R must contain hyp(F).
    let z = f.s_table().center();
    assert!(p_power_index_subsystem(&f, &z).is_err());
}

#[test]
fn center_examples() {
    let (f, _) = f_s4();
    assert_eq!(center_of_fusion_system(&f).members, vec![0]);

    let d8 = realized_system_for("dihedral:8", 2, &caps()).unwrap();
    let z = center_of_fusion_system(&d8);
    assert_eq!(z.members, d8.s_table().center().members().to_vec());

    // F_S(A_4 × C_2) at p = 2: Z(F) = C_2 = Z(G).
    let f24 = realized_system_for("product:(alt:4,cyclic:2)", 2, &caps()).unwrap();
    let z24 = center_of_fusion_system(&f24);
    assert_eq!(z24.members.len(), 2);
    let g = build_group("product:(alt:4,cyclic:2)", &caps()).unwrap();
    assert_eq!(g.center().order(), 2);
}

#[test]
fn pair_embedding_is_checked() {
    let gp = build_pair("pair:(sym:4, alt:4, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    // A non-homomorphic embedding is rejected.
    let mut bad = pair.t_in_s.to_vec();
    bad[1] = bad[2];
    assert!(NormalPair::new(Arc::clone(&pair.f), Arc::clone(&pair.e), bad).is_err());
}

#[test]
fn sylow_intersection_is_sylow_in_normal_subgroup() {
    for spec in ["pair:(sym:6, alt:6, 2)", "pair:(sym:4, klein:4, 2)"] {
        let gp = build_pair(spec, &caps()).unwrap();
        let s = sylow_subgroup(&gp.g, gp.p);
        let t = s.intersect(&gp.h);
        assert_eq!(
            t.order(),
            fusionkit::group::p_part(gp.h.order(), gp.p),
            "failed for {spec}"
        );
    }
}
