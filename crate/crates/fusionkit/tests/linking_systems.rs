//! Linking-system behavior on the small catalog: transporter quotients,
//! conjugation functors, kernels, isotypical autoequivalences and the
//! Theorem-A exact-sequence checks.

use fusionkit::caps::Caps;
use fusionkit::catalog::{build_group, build_pair};
use fusionkit::group::{sylow_subgroup, Elem, Subgroup};
use fusionkit::linking::{
    build_linking_system, conjugation_functor, enumerate_isotypical_autoequivalences,
    kernel_of_conjugation, l_naturally_isomorphic, out_typ_classes, verify_theorem_a,
    IsotypicalFunctor, LinkingSystem, ObjectPolicy,
};

fn caps() -> Caps {
    Caps::default()
}

/// L for the full group, L_0 for H ⊴ G at the Sylow intersection.
fn linking_pair(spec: &str) -> (LinkingSystem, LinkingSystem, Subgroup) {
    let gp = build_pair(spec, &caps()).unwrap();
    let s = sylow_subgroup(&gp.g, gp.p);
    let t = s.intersect(&gp.h);
    let full = gp.g.full_subgroup();
    let l = build_linking_system(&gp.g, &full, &s, gp.p, ObjectPolicy::AutoCentric, &caps()).unwrap();
    let l0 = build_linking_system(&gp.g, &gp.h, &t, gp.p, ObjectPolicy::AutoCentric, &caps()).unwrap();
    (l, l0, t)
}

#[test]
fn linking_system_of_a4() {
    // G = A_4, S = V_4: one object, Aut_L(V_4) ≅ A_4.
    let g = build_group("alt:4", &caps()).unwrap();
    let s = sylow_subgroup(&g, 2);
    let full = g.full_subgroup();
    let l = build_linking_system(&g, &full, &s, 2, ObjectPolicy::AutoCentric, &caps()).unwrap();
    assert_eq!(l.objects().len(), 1);
    let (aut_table, _) = l.aut_l_group(&l.objects()[0].clone()).unwrap();
    assert_eq!(aut_table.order(), 12);
    assert!(!aut_table.is_abelian());
    // A_4 fingerprint: element orders only 1, 2, 3.
    let max_order = (0..aut_table.order() as Elem)
        .map(|x| aut_table.element_order(x))
        .max()
        .unwrap();
    assert_eq!(max_order, 3);
}

#[test]
fn linking_system_of_p_group_is_transporter_category() {
    // G = S = D_8: morphism sets are exact transporter sets.
    let g = build_group("dihedral:8", &caps()).unwrap();
    let s = g.full_subgroup();
    let l = build_linking_system(&g, &s, &s, 2, ObjectPolicy::AutoCentric, &caps()).unwrap();
    for (pi, p_obj) in l.objects().iter().enumerate() {
        for (qi, q_obj) in l.objects().iter().enumerate() {
            let transporter = (0..g.order() as Elem)
                .filter(|&k| p_obj.members().iter().all(|&x| q_obj.contains(g.conj(x, k))))
                .count();
            assert_eq!(l.morphisms(pi, qi).len(), transporter, "pair ({pi},{qi})");
        }
    }
}

#[test]
fn aut_l_of_sylow_in_sym4() {
    // G = S_4, S = D_8: Aut_L(D_8) = N_{S_4}(D_8) = D_8.
    let g = build_group("sym:4", &caps()).unwrap();
    let s = sylow_subgroup(&g, 2);
    let full = g.full_subgroup();
    let l = build_linking_system(&g, &full, &s, 2, ObjectPolicy::AutoCentric, &caps()).unwrap();
    let (reps, extended) = l.aut_l(&s);
    assert!(!extended);
    assert_eq!(reps.len(), 8);
}

#[test]
fn conjugation_functor_examples() {
    // Central involution of A_4 × C_2 induces the identity functor.
    let (l, l0, _t) = linking_pair("pair:(product:(alt:4,cyclic:2), alt:4, 2)");
    let z = l.g().center();
    assert_eq!(z.order(), 2);
    let central = z.members()[1];
    let functor = conjugation_functor(&l, &l0, central).unwrap();
    assert!(functor.is_identity());

    // A 3-element of S_4 acts nontrivially on L_0 of (S_4, A_4).
    let (l, l0, _t) = linking_pair("pair:(sym:4, alt:4, 2)");
    let g = l.g();
    let three_elem = (0..g.order() as Elem)
        .find(|&x| g.element_order(x) == 3)
        .unwrap();
    let functor = conjugation_functor(&l, &l0, three_elem).unwrap();
    assert!(!functor.is_identity());
    assert!(functor.sends_inclusions_to_inclusions);
}

#[test]
fn conjugation_is_homomorphism_on_generators() {
    let (l, l0, t) = linking_pair("pair:(sym:4, alt:4, 2)");
    let (reps, _) = l.aut_l(&t);
    for &a in reps.iter().take(6) {
        for &b in reps.iter().take(6) {
            let ca = conjugation_functor(&l, &l0, a).unwrap();
            let cb = conjugation_functor(&l, &l0, b).unwrap();
            let cab = conjugation_functor(&l, &l0, l.g().mul(a, b)).unwrap();
            assert_eq!(ca.then(&cb).object_map, cab.object_map);
            assert_eq!(ca.then(&cb).morphism_map, cab.morphism_map);
        }
    }
}

#[test]
fn kernel_examples() {
    // (S_4, A_4): kernel trivial, C_S(E) = 1.
    let (l, l0, t) = linking_pair("pair:(sym:4, alt:4, 2)");
    let report = kernel_of_conjugation(&l, &l0, &t, &[0]).unwrap();
    assert_eq!(report.kernel_reps.len(), 1);
    assert!(report.kernel_matches_delta_image);
    assert!(report.delta_injective);

    // (A_4 × C_2, A_4): kernel of order 2 = δ(C_2).
    let (l, l0, t) = linking_pair("pair:(product:(alt:4,cyclic:2), alt:4, 2)");
    let z = l.g().center();
    let cse_in_g: Vec<Elem> = z.members().to_vec();
    let report = kernel_of_conjugation(&l, &l0, &t, &cse_in_g).unwrap();
    assert_eq!(report.kernel_reps.len(), 2);
    assert!(report.kernel_matches_delta_image);
}

#[test]
fn single_object_enumeration() {
    // L_0 of (A_4, V_4): functors are the V_4-stabilizing automorphisms of
    // Aut_{L_0}(V_4) ≅ A_4, i.e. all of Aut(A_4), 24 of them.
    let (_, l0, _) = linking_pair("pair:(sym:4, alt:4, 2)");
    assert_eq!(l0.objects().len(), 1);
    let functors = enumerate_isotypical_autoequivalences(&l0, true, &caps()).unwrap();
    assert_eq!(functors.len(), 24);
    // The identity is among them.
    assert!(functors.iter().any(|f| f.is_identity()));
}

#[test]
fn trivial_fusion_single_object_enumeration() {
    // A p-group with one centric object S: functors correspond to the
    // δ-stabilizing automorphisms of Aut_{L_0}(S) = S; identity present.
    let g = build_group("cyclic:4", &caps()).unwrap();
    let s = g.full_subgroup();
    let l = build_linking_system(&g, &s, &s, 2, ObjectPolicy::AutoCentric, &caps()).unwrap();
    let functors = enumerate_isotypical_autoequivalences(&l, true, &caps()).unwrap();
    assert!(functors.iter().any(|f| f.is_identity()));
    // Aut_L(S) = S = C_4; its automorphism group has order 2.
    assert_eq!(functors.len(), 2);
}

#[test]
fn l_natural_isomorphism_witnesses() {
    let (l, l0, t) = linking_pair("pair:(sym:4, alt:4, 2)");
    // α = β: the identity tuple of witnesses works.
    let id = IsotypicalFunctor::identity(&l0);
    assert!(l_naturally_isomorphic(&l, &l0, &id, &id).is_some());

    // Every conjugation functor is L-naturally isomorphic to the identity
    // via restrictions of γ.
    let (reps, _) = l.aut_l(&t);
    for &gamma in &reps {
        let c = conjugation_functor(&l, &l0, gamma).unwrap();
        assert!(l_naturally_isomorphic(&l, &l0, &c, &id).is_some());
    }
}

#[test]
fn outer_functor_with_no_witness() {
    // Ambient (A_4, A_4): η must come from A_4 itself, so the S_4-style
    // outer automorphisms of Aut_{L_0}(V_4) ≅ A_4 have no witness and
    // Out^L splits into two classes.
    let (l, l0, _) = linking_pair("pair:(alt:4, alt:4, 2)");
    let functors = enumerate_isotypical_autoequivalences(&l0, true, &caps()).unwrap();
    assert_eq!(functors.len(), 24);
    let id = IsotypicalFunctor::identity(&l0);
    let trivial: Vec<_> = functors
        .iter()
        .filter(|f| l_naturally_isomorphic(&l, &l0, f, &id).is_some())
        .collect();
    assert_eq!(trivial.len(), 12);
    let classes = out_typ_classes(&l, &l0, &functors);
    assert_eq!(classes.len(), 2);
    // L-natural isomorphism is symmetric on what we enumerated: each class
    // member is equivalent to its class representative.
    for class in &classes {
        let rep = &functors[class[0]];
        for &i in class {
            assert!(l_naturally_isomorphic(&l, &l0, rep, &functors[i]).is_some());
        }
    }
}

#[test]
fn theorem_a_on_sym4_alt4() {
    let gp = build_pair("pair:(sym:4, alt:4, 2)", &caps()).unwrap();
    let report = verify_theorem_a(&gp, &caps()).unwrap();
    assert!(report.passed, "{report:?}");
    assert_eq!(report.cse_order, 1);
    match &report.check3 {
        fusionkit::linking::Check3::Ran {
            matches,
            image_size,
            trivial_class_size,
            ..
        } => {
            assert!(matches);
            assert_eq!(image_size, trivial_class_size);
        }
        fusionkit::linking::Check3::Skipped { reason } => panic!("check3 skipped: {reason}"),
    }
}

#[test]
fn theorem_a_degenerate_pair() {
    // (G, G) with T = S degenerates to the Z(F) consistency check.
    let gp = build_pair("pair:(sym:4, sym:4, 2)", &caps()).unwrap();
    let report = verify_theorem_a(&gp, &caps()).unwrap();
    assert!(report.passed, "{report:?}");
    assert_eq!(report.cse_order, 1); // Z(F_{D_8}(S_4)) = Z(S_4) = 1.
}

#[test]
fn theorem_a_odd_prime_pair() {
    let gp = build_pair("pair:(product:(sym:3,cyclic:3), sym:3, 3)", &caps()).unwrap();
    let report = verify_theorem_a(&gp, &caps()).unwrap();
    assert!(report.passed, "{report:?}");
    // C_S(E) = 1 × C_3 of order 3.
    assert_eq!(report.cse_order, 3);
    assert!(matches!(report.check3, fusionkit::linking::Check3::Ran { .. }));
}
