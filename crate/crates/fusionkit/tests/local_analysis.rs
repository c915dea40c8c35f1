//! Local data, verified models, chains, the intersection formula, Gross's
//! theorem and the Theorem-B pipeline on the small catalog.

use fusionkit::caps::Caps;
use fusionkit::catalog::{build_group, build_pair, realized_normal_pair};
use fusionkit::group::{Elem, Subgroup};
use fusionkit::local::{
    centralizer_subgroup_local, centric_normalized_family, local_datum, local_k_groups,
    local_model, run_conjecture_52, run_conjecture_53, strongly_normalized_chain, verify_gross,
    verify_prop_hyp_containment, verify_theorem_b,
};

fn caps() -> Caps {
    Caps::default()
}

#[test]
fn local_datum_and_model_for_sym4() {
    let gp = build_pair("pair:(sym:4, alt:4, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    let t = pair.t_sub();
    let trivial = pair.f.subgroup_from_members(vec![0]);
    // U = T = V_4, X = 1: U_X = V_4 C_{D_8}(V_4) = V_4.
    let datum = local_datum(&pair, &t, &trivial).unwrap();
    assert_eq!(datum.u_x.order(), 4);
    assert!(datum.replaced.is_none());
    // D = N_F^K(V_4) lives on N_S(V_4) = D_8.
    assert_eq!(datum.d.s_table().order(), 8);

    // G(T,1) ≅ S_4 (N_{S_4}(V_4) = S_4, O_{2'} = 1), H(T,1) ≅ A_4.
    let model = local_model(&pair, &gp.h, &datum).unwrap();
    assert_eq!(model.g_model.order(), 24);
    assert_eq!(model.h_model.order(), 12);
    assert_eq!(model.s_model.order(), 8);
    assert_eq!(model.t_model.order(), 4);

    // C(T,1) = C_{S_4}(V_4) = V_4 and K(T,1) = O^2(V_4) = 1, and the
    // displayed identity holds.
    let k_groups = local_k_groups(&pair, &datum, &model).unwrap();
    assert_eq!(k_groups.c_group.order(), 4);
    assert_eq!(k_groups.k_group.order(), 1);
    assert_eq!(k_groups.displayed_identity, Some(true));
}

#[test]
fn local_model_for_a4_times_c2() {
    let gp = build_pair("pair:(product:(alt:4,cyclic:2), alt:4, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    let t = pair.t_sub();
    let trivial = pair.f.subgroup_from_members(vec![0]);
    let datum = local_datum(&pair, &t, &trivial).unwrap();
    // U_X = V_4 · C_S(V_4) = S (S = V_4 × C_2 is abelian).
    assert_eq!(datum.u_x.order(), 8);
    let model = local_model(&pair, &gp.h, &datum).unwrap();
    assert_eq!(model.g_model.order(), 24);
    assert_eq!(model.h_model.order(), 12);
    // C(T,1) = C_G(V_4) = V_4 × C_2, K(T,1) = O^2 of an abelian 2-group = 1.
    let k_groups = local_k_groups(&pair, &datum, &model).unwrap();
    assert_eq!(k_groups.c_group.order(), 8);
    assert_eq!(k_groups.k_group.order(), 1);
    assert_eq!(k_groups.displayed_identity, Some(true));
}

#[test]
fn datum_with_nontrivial_x() {
    // (A_4 × C_2, A_4) with X = C_S(T) = S: U_X = S again; the lemma
    // consequence C_S(H(U)) = C_S(H(U,X)) is checked across X choices.
    let gp = build_pair("pair:(product:(alt:4,cyclic:2), alt:4, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    let t = pair.t_sub();
    let full = pair.f.full();
    let c_s_t = Subgroup::centralizer_in(&full, &t);
    let trivial = pair.f.subgroup_from_members(vec![0]);

    let datum_1 = local_datum(&pair, &t, &trivial).unwrap();
    let model_1 = local_model(&pair, &gp.h, &datum_1).unwrap();
    let c_at_1: Vec<Elem> = model_1.centralizing_members();

    let datum_x = local_datum(&pair, &t, &c_s_t).unwrap();
    let model_x = local_model(&pair, &gp.h, &datum_x).unwrap();
    let c_at_x: Vec<Elem> = model_x.centralizing_members();
    assert_eq!(c_at_1, c_at_x);
}

#[test]
fn chains() {
    // U = T: the chain has length 0.
    let gp = build_pair("pair:(sym:4, alt:4, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    let t = pair.t_sub();
    let trivial = pair.f.subgroup_from_members(vec![0]);
    let result = strongly_normalized_chain(&pair, &t, &trivial).unwrap();
    let chain = result.chain.unwrap();
    assert_eq!(chain.subgroups.len(), 1);
    assert!(!result.theorem_violation);

    // U = ⟨double transposition⟩ < V_4 is not T-centric: precondition error.
    let u_small = pair
        .f
        .subgroup_from_members(vec![0, t.members()[1]]);
    assert!(strongly_normalized_chain(&pair, &u_small, &trivial).is_err());
}

#[test]
fn chain_transport_orders_on_sym6() {
    // A nontrivial chain U < T on (S_6, A_6): |C(U_j, X)| and |K(U_j, X)|
    // are constant along the chain.
    let gp = build_pair("pair:(sym:6, alt:6, 2)", &caps()).unwrap();
    let pair = realized_normal_pair(&gp, &caps()).unwrap();
    let t = pair.t_sub();
    let trivial = pair.f.subgroup_from_members(vec![0]);
    let family = centric_normalized_family(&pair);
    let mut checked_nontrivial = false;
    for u in &family {
        if u.order() == t.order() {
            continue;
        }
        let result = strongly_normalized_chain(&pair, u, &trivial).unwrap();
        let chain = match result.chain {
            Some(c) => c,
            None => panic!("chain existence is asserted by the theory"),
        };
        assert!(chain.subgroups.len() > 1);
        let mut c_orders = Vec::new();
        let mut k_orders = Vec::new();
        for u_j in &chain.subgroups {
            let datum = local_datum(&pair, u_j, &trivial).unwrap();
            let model = local_model(&pair, &gp.h, &datum).unwrap();
            let kg = local_k_groups(&pair, &datum, &model).unwrap();
            c_orders.push(kg.c_group.order());
            k_orders.push(kg.k_group.order());
        }
        assert!(c_orders.windows(2).all(|w| w[0] == w[1]), "{c_orders:?}");
        assert!(k_orders.windows(2).all(|w| w[0] == w[1]), "{k_orders:?}");
        checked_nontrivial = true;
    }
    assert!(checked_nontrivial);
}

#[test]
fn intersection_formula_cross_validates() {
    for (spec, expected_order) in [
        ("pair:(sym:4, alt:4, 2)", 1),
        ("pair:(product:(alt:4,cyclic:2), alt:4, 2)", 2),
        ("pair:(sym:4, sym:4, 2)", 1),
        ("pair:(alt:4, klein:4, 2)", 4),
        ("pair:(dihedral:8, cyclic:4, 2)", 4),
    ] {
        let gp = build_pair(spec, &caps()).unwrap();
        let report = centralizer_subgroup_local(&gp, &caps()).unwrap();
        assert!(report.matches_direct, "{spec}: {report:?}");
        assert_eq!(report.members.len(), expected_order, "{spec}");
    }
}

#[test]
fn prop_hyp_containment() {
    for spec in [
        "pair:(sym:4, alt:4, 2)",
        "pair:(product:(alt:4,cyclic:2), alt:4, 2)",
    ] {
        let gp = build_pair(spec, &caps()).unwrap();
        let report = verify_prop_hyp_containment(&gp, &caps()).unwrap();
        assert!(report.passed, "{spec}: {report:?}");
        assert_eq!(report.hyp_cft_order, 1);
    }
    // (S_4, A_4) qualifies for the Gross-corollary containment.
    let gp = build_pair("pair:(sym:4, alt:4, 2)", &caps()).unwrap();
    let report = verify_prop_hyp_containment(&gp, &caps()).unwrap();
    assert_eq!(report.op_containment, Some(true));
}

#[test]
fn gross_examples() {
    // S_4 at p = 2: C = C_{Aut(S_4)}(D_8) = δ-image of Z(D_8), of order 2;
    // it trivially has a normal 2-complement.
    let g = build_group("sym:4", &caps()).unwrap();
    let report = verify_gross("sym:4", &g, 2, &caps()).unwrap();
    assert!(report.applicable);
    assert_eq!(report.c_order, 2);
    assert!(report.passed);

    // A p-group: C = {φ : φ|_G = id} = 1.
    let d8 = build_group("dihedral:8", &caps()).unwrap();
    let report = verify_gross("dihedral:8", &d8, 2, &caps()).unwrap();
    assert!(report.applicable);
    assert_eq!(report.c_order, 1);
    assert!(report.passed);

    // S_3 at p = 3: O_{3'} = 1, 3-constrained; C ≅ C_3 has a normal
    // 3-complement.
    let s3 = build_group("sym:3", &caps()).unwrap();
    let report = verify_gross("sym:3", &s3, 3, &caps()).unwrap();
    assert!(report.applicable);
    assert!(report.passed);
}

#[test]
fn theorem_b_examples() {
    for (spec, hyp, cse, cst) in [
        ("pair:(sym:4, alt:4, 2)", 1, 1, 4),
        ("pair:(product:(alt:4,cyclic:2), alt:4, 2)", 1, 2, 8),
        ("pair:(sym:4, sym:4, 2)", 1, 1, 2),
    ] {
        let gp = build_pair(spec, &caps()).unwrap();
        let report = verify_theorem_b(&gp, &caps()).unwrap();
        assert!(report.passed, "{spec}: {report:?}");
        assert_eq!(report.hyp_cft_order, hyp, "{spec}");
        assert_eq!(report.cse_order, cse, "{spec}");
        assert_eq!(report.cst_order, cst, "{spec}");
    }
}

#[test]
fn conjecture_52_small_pairs() {
    for spec in [
        "pair:(sym:4, alt:4, 2)",
        "pair:(dihedral:8, cyclic:4, 2)",
        "pair:(product:(alt:4,cyclic:2), alt:4, 2)",
    ] {
        let gp = build_pair(spec, &caps()).unwrap();
        let report = run_conjecture_52(&gp, &caps()).unwrap();
        assert!(report.qualifies, "{spec}");
        assert!(report.holds, "{spec}: {report:?}");
    }
    // O_{p'}(H) ≠ 1: (S_3, S_3) at p = 2 has O_{2'} = C_3, so the pair is
    // skipped with notice.
    let gp = build_pair("pair:(sym:3, sym:3, 2)", &caps()).unwrap();
    let report = run_conjecture_52(&gp, &caps()).unwrap();
    assert!(!report.qualifies);
}

#[test]
fn conjecture_53_small_pairs() {
    for spec in ["pair:(sym:4, alt:4, 2)", "pair:(dihedral:8, cyclic:4, 2)"] {
        let gp = build_pair(spec, &caps()).unwrap();
        let report = run_conjecture_53(&gp, &caps()).unwrap();
        assert!(report.qualifies, "{spec}");
        assert!(report.csh_sylow_in_cgh, "{spec}");
        assert!(report.holds, "{spec}: {report:?}");
        assert!(report.p_power_index_route, "{spec}: {report:?}");
    }
}
