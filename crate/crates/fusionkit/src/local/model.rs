//! Local data (U_X, K, D(U,X)) and the verified local models
//! (G(U,X), H(U,X)).

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fusion::{k_normalizer_system, FusionSystem, Morphism, NormalPair};
use crate::group::{
    p_part, quotient_group, residual_subgroup, structure_predicates, Elem, GroupTable,
    ResidualKind, Subgroup,
};

/// The data attached to (U, X): U_X = UXC_S(UX), the automorphism family K,
/// and D(U,X) = N_F^K(U_X).
pub struct LocalDatum {
    /// All subgroups in S-coordinates of the ambient F.
    pub u: Subgroup,
    pub x: Subgroup,
    pub u_x: Subgroup,
    /// K = {φ ∈ Aut_F(U_X) : (UX)φ = UX}, as morphisms on U_X.
    pub k: Vec<Morphism>,
    /// D(U,X) = N_F^K(U_X) on N_S^K(U_X); member list in S-coordinates.
    pub d: FusionSystem,
    pub d_members: Vec<Elem>,
    /// Populated when (U, X) had to be replaced by an F-conjugate to make
    /// UX fully N_F(U)-normalized.
    pub replaced: Option<String>,
}

/// Is `w_sub` fully N_F(U)-normalized?  Checked inside the normalizer
/// system N_F(U).
pub(crate) fn fully_normalized_in_normalizer(
    f: &FusionSystem,
    u: &Subgroup,
    w_sub: &Subgroup,
) -> Result<bool> {
    let aut_u: Vec<Morphism> = f.aut_f(u).to_vec();
    let n_sys = k_normalizer_system(f, u, &aut_u)?;
    // Translate w into the normalizer system's coordinates.
    let full = f.full();
    let n_s_u = Subgroup::normalizer_in(&full, u);
    let to_n = |x: Elem| -> Option<Elem> {
        n_s_u.members().binary_search(&x).ok().map(|i| i as Elem)
    };
    let w_in_n: Option<Vec<Elem>> = w_sub.members().iter().map(|&x| to_n(x)).collect();
    let w_in_n = match w_in_n {
        Some(v) => v,
        None => return Ok(false),
    };
    let w_n = n_sys.subgroup_from_members(w_in_n);
    let status = n_sys.classify_subgroup(&w_n, None);
    Ok(status.fully_normalized)
}

/// Builds the local datum for (U, X).  U must be fully F-normalized and
/// T-centric with X ≤ C_S(T); when UX is not fully N_F(U)-normalized an
/// F-conjugate replacement is searched smallest-first and reported.
pub fn local_datum(pair: &NormalPair, u: &Subgroup, x: &Subgroup) -> Result<LocalDatum> {
    let f = &pair.f;
    let t_sub = pair.t_sub();
    let full = f.full();
    let c_s_t = Subgroup::centralizer_in(&full, &t_sub);
    if !c_s_t.contains_subgroup(x) {
        return Err(Error::Precondition("X is not inside C_S(T)".into()));
    }
    let status = f.classify_subgroup(u, Some(&t_sub));
    if !t_sub.contains_subgroup(u) || !status.fully_normalized || status.t_centric != Some(true) {
        return Err(Error::Precondition(
            "U must be a fully F-normalized T-centric subgroup of T".into(),
        ));
    }

    let (u_used, x_used, replaced) = {
        let ux = u.product(x);
        if fully_normalized_in_normalizer(f, u, &ux)? {
            (u.clone(), x.clone(), None)
        } else {
            find_replacement(pair, u, x)?
        }
    };

    let ux = u_used.product(&x_used);
    let c_s_ux = Subgroup::centralizer_in(&full, &ux);
    let u_x = ux.product(&c_s_ux);
    let auts = f.aut_f(&u_x);
    let k: Vec<Morphism> = auts
        .iter()
        .filter(|m| {
            let mut images: Vec<Elem> = ux.members().iter().map(|&e| m.apply(e)).collect();
            images.sort_unstable();
            images == *ux.members()
        })
        .cloned()
        .collect();
    let d = k_normalizer_system(f, &u_x, &k)?;
    let n_s_k = Subgroup::normalizer_in(&full, &u_x);
    let d_members: Vec<Elem> = n_s_k
        .members()
        .iter()
        .copied()
        .filter(|&s| {
            let conj = Morphism::conjugation(&u_x, s);
            k.iter().any(|m| m.images() == conj.images())
        })
        .collect();
    if d_members.len() != d.s_table().order() {
        return Err(Error::Precondition(
            "N_S^K(U_X) disagrees with the K-normalizer system".into(),
        ));
    }
    Ok(LocalDatum {
        u: u_used,
        x: x_used,
        u_x,
        k,
        d,
        d_members,
        replaced,
    })
}

/// Smallest-first search for an F-conjugate (Uα, Xα) with (UX)α fully
/// N_F(Uα)-normalized and all preconditions restored.
fn find_replacement(
    pair: &NormalPair,
    u: &Subgroup,
    x: &Subgroup,
) -> Result<(Subgroup, Subgroup, Option<String>)> {
    let f = &pair.f;
    let t_sub = pair.t_sub();
    let full = f.full();
    let c_s_t = Subgroup::centralizer_in(&full, &t_sub);
    let ux = u.product(x);
    let homs = f.hom_set(&ux, &full);
    for alpha in homs.iter() {
        let u_im = f.subgroup_from_members(u.members().iter().map(|&e| alpha.apply(e)).collect());
        let x_im = f.subgroup_from_members(x.members().iter().map(|&e| alpha.apply(e)).collect());
        if !t_sub.contains_subgroup(&u_im) || !c_s_t.contains_subgroup(&x_im) {
            continue;
        }
        let status = f.classify_subgroup(&u_im, Some(&t_sub));
        if !status.fully_normalized || status.t_centric != Some(true) {
            continue;
        }
        let ux_im = u_im.product(&x_im);
        if fully_normalized_in_normalizer(f, &u_im, &ux_im)? {
            let note = format!(
                "replaced (U, X) by conjugate under α with images {:?}",
                alpha.images()
            );
            return Ok((u_im, x_im, Some(note)));
        }
    }
    Err(Error::Precondition(
        "no F-conjugate of (U, X) makes UX fully N_F(U)-normalized".into(),
    ))
}

/// The verified local model: G(U,X) = N°/O_{p'}(N°) for
/// N° = {g ∈ N_G(U_X) : c_g|_{U_X} ∈ K}, with H(U,X) the image of N° ∩ H.
pub struct LocalModel {
    pub g_model: Arc<GroupTable>,
    pub h_model: Subgroup,
    /// The embedded Sylow subgroup: image of N_S(UX).
    pub s_model: Subgroup,
    /// Image of N_T(U).
    pub t_model: Subgroup,
    /// S-coordinate -> model element, for every member of N_S(UX).
    pub embedding: Vec<(Elem, Elem)>,
}

impl LocalModel {
    pub fn embed(&self, s_elem: Elem) -> Option<Elem> {
        self.embedding
            .binary_search_by_key(&s_elem, |&(s, _)| s)
            .ok()
            .map(|i| self.embedding[i].1)
    }

    /// Elements of the embedded N_S-side whose image centralizes H(U,X),
    /// in S-coordinates.  This is the reading of C_S(H(U)) used throughout.
    pub fn centralizing_members(&self) -> Vec<Elem> {
        self.embedding
            .iter()
            .filter(|&&(_, m)| {
                self.h_model.members().iter().all(|&h| {
                    self.g_model.mul(m, h) == self.g_model.mul(h, m)
                })
            })
            .map(|&(s, _)| s)
            .collect()
    }
}

/// Builds G(U,X) and H(U,X) and verifies every model axiom; fails loudly
/// with the violated axiom otherwise.
pub fn local_model(pair: &NormalPair, h_in_g: &Subgroup, datum: &LocalDatum) -> Result<LocalModel> {
    let f = &pair.f;
    let p = f.prime();
    let (g, embed) = f
        .ambient_group()
        .ok_or_else(|| Error::Precondition("realized pair required for local models".into()))?;
    let to_g = |x: Elem| -> Elem { embed[x as usize] };
    let u_x_g = Subgroup::from_members_unchecked(g, datum.u_x.members().iter().map(|&x| to_g(x)).collect());
    let n_g_ux = Subgroup::normalizer_in(&g.full_subgroup(), &u_x_g);
    // K as image tuples on U_X's G-members (sorted source order).
    let k_tuples: BTreeSet<Vec<Elem>> = datum
        .k
        .iter()
        .map(|m| m.images().iter().map(|&x| to_g(x)).collect())
        .collect();
    let n_core: Vec<Elem> = n_g_ux
        .members()
        .iter()
        .copied()
        .filter(|&n| {
            let tuple: Vec<Elem> = u_x_g.members().iter().map(|&x| g.conj(x, n)).collect();
            k_tuples.contains(&tuple)
        })
        .collect();
    let n_core_sub = Subgroup::from_members_unchecked(g, n_core);
    let (n_table, n_members) = n_core_sub.as_group()?;
    let o_pp = residual_subgroup(&n_table, p, ResidualKind::OpPrimeLower);
    let quot = quotient_group(&n_table, &o_pp)?;
    let g_model = quot.table;

    // H(U,X): image of N° ∩ H.
    let h_members_model: Vec<Elem> = n_members
        .iter()
        .enumerate()
        .filter(|(_, g_idx)| h_in_g.contains(**g_idx))
        .map(|(i, _)| quot.projection[i])
        .collect();
    let h_model = Subgroup::from_members_unchecked(&g_model, h_members_model);

    // Embedding of N_S(UX) = N_S^K(U_X).
    let mut embedding: Vec<(Elem, Elem)> = datum
        .d_members
        .iter()
        .map(|&s| {
            let g_idx = to_g(s);
            let n_idx = n_members
                .binary_search(&g_idx)
                .expect("N_S(UX) lies inside N°");
            (s, quot.projection[n_idx])
        })
        .collect();
    embedding.sort_unstable();
    // Injectivity on the p-group side.
    let image_set: BTreeSet<Elem> = embedding.iter().map(|&(_, m)| m).collect();
    if image_set.len() != embedding.len() {
        return Err(Error::ModelVerification {
            axiom: "Sylow embedding injective",
            detail: "p-elements collapsed into O_{p'}(N°)".into(),
        });
    }
    let s_model = Subgroup::from_members_unchecked(&g_model, image_set.iter().copied().collect());

    // N_T(U) image.
    let t_sub = pair.t_sub();
    let n_t_u = Subgroup::normalizer_in(&t_sub, &datum.u);
    let t_model_members: Vec<Elem> = n_t_u
        .members()
        .iter()
        .map(|&s| {
            embedding
                .binary_search_by_key(&s, |&(a, _)| a)
                .map(|i| embedding[i].1)
                .expect("N_T(U) lies inside N_S(UX)")
        })
        .collect();
    let t_model = Subgroup::from_members_unchecked(&g_model, t_model_members);

    let model = LocalModel {
        g_model,
        h_model,
        s_model,
        t_model,
        embedding,
    };
    verify_model(pair, datum, &model)?;
    Ok(model)
}

fn verify_model(pair: &NormalPair, datum: &LocalDatum, model: &LocalModel) -> Result<()> {
    let p = pair.f.prime();
    let g_model = &model.g_model;
    // O_{p'}(G(U,X)) = 1 and the model is p-constrained.
    let preds = structure_predicates(g_model, p);
    if !preds.o_p_prime_trivial {
        return Err(Error::ModelVerification {
            axiom: "O_{p'}(G(U,X)) = 1",
            detail: "nontrivial p'-core survived the quotient".into(),
        });
    }
    if preds.is_p_constrained != Some(true) {
        return Err(Error::ModelVerification {
            axiom: "G(U,X) constrained",
            detail: "O_p(G(U,X)) is not centric".into(),
        });
    }
    // The embedded N_S(UX) is Sylow in the model.
    if model.s_model.order() != p_part(g_model.order(), p) {
        return Err(Error::ModelVerification {
            axiom: "Sylow embedding",
            detail: format!(
                "|image| = {} vs p-part {}",
                model.s_model.order(),
                p_part(g_model.order(), p)
            ),
        });
    }
    // Fusion of the model on the embedded Sylow equals D(U,X).
    let model_system = FusionSystem::realized(g_model, &model.s_model, p, *pair.f.caps())?;
    // D's table index i corresponds to S-coordinate d_members[i], which
    // embeds to a model element; the model system's table index of that
    // element is its position in the sorted member list of s_model.
    let map: Vec<Elem> = datum
        .d_members
        .iter()
        .map(|&s| {
            let m = model.embed(s).expect("embedded");
            model.s_model.members().binary_search(&m).unwrap() as Elem
        })
        .collect();
    if !datum.d.hom_equal_via(&model_system, &map)? {
        return Err(Error::ModelVerification {
            axiom: "model fusion = D(U,X)",
            detail: "hom-sets differ".into(),
        });
    }
    // H(U,X) is normal with the embedded N_T(U) as a Sylow subgroup, and the
    // fusion of H(U,X) on it equals N_E(U).
    if !model.h_model.is_normal_in(&g_model.full_subgroup()) {
        return Err(Error::ModelVerification {
            axiom: "H(U,X) normal",
            detail: "normality fails".into(),
        });
    }
    if model.t_model.order() != p_part(model.h_model.order(), p) {
        return Err(Error::ModelVerification {
            axiom: "N_T(U) Sylow in H(U,X)",
            detail: format!(
                "|image| = {} vs p-part {}",
                model.t_model.order(),
                p_part(model.h_model.order(), p)
            ),
        });
    }
    if !model.h_model.contains_subgroup(&model.t_model) {
        return Err(Error::ModelVerification {
            axiom: "N_T(U) inside H(U,X)",
            detail: "embedding escapes H".into(),
        });
    }
    // N_E(U) on N_T(U).
    let e = &pair.e;
    let u_t = pair.subgroup_to_t(&datum.u);
    let aut_u_e: Vec<Morphism> = e.aut_f(&u_t).to_vec();
    let n_e_u = k_normalizer_system(e, &u_t, &aut_u_e)?;
    let t_sub = pair.t_sub();
    let n_t_u = Subgroup::normalizer_in(&t_sub, &datum.u);
    // N_E(U)'s table index i corresponds to the i-th member of N_T(U) in
    // E-coordinates, which maps through S-coordinates into the model.
    let n_t_u_e = Subgroup::normalizer_in(&e.full(), &u_t);
    debug_assert_eq!(n_t_u_e.order(), n_t_u.order());
    let (h_table, h_members) = model.h_model.as_group()?;
    let h_system = FusionSystem::realized(
        &h_table,
        &Subgroup::from_members_unchecked(
            &h_table,
            model
                .t_model
                .members()
                .iter()
                .map(|&m| h_members.binary_search(&m).unwrap() as Elem)
                .collect(),
        ),
        p,
        *pair.f.caps(),
    )?;
    let map_e: Vec<Elem> = n_t_u_e
        .members()
        .iter()
        .map(|&et| {
            let s_coord = pair.t_in_s[et as usize];
            let m = model.embed(s_coord).expect("embedded");
            model.t_model.members().binary_search(&m).unwrap() as Elem
        })
        .collect();
    if !n_e_u.hom_equal_via(&h_system, &map_e)? {
        return Err(Error::ModelVerification {
            axiom: "H(U,X) fusion = N_E(U)",
            detail: "hom-sets differ".into(),
        });
    }
    Ok(())
}

/// C(U,X) = C_{G(U,X)}(N_T(U)-image) and K(U,X) = O^p(C(U,X)).
pub struct LocalKGroups {
    pub c_group: Subgroup,
    pub k_group: Subgroup,
    /// When U = T: does O^p(Aut_{C_F(T)}(X)) = Aut_{K(T,X)}(X) hold?
    pub displayed_identity: Option<bool>,
}

pub fn local_k_groups(
    pair: &NormalPair,
    datum: &LocalDatum,
    model: &LocalModel,
) -> Result<LocalKGroups> {
    let p = pair.f.prime();
    let c_group = Subgroup::centralizer_in(&model.g_model.full_subgroup(), &model.t_model);
    let (c_table, c_members) = c_group.as_group()?;
    let op = residual_subgroup(&c_table, p, ResidualKind::OpUpper);
    let k_group = Subgroup::from_members_unchecked(
        &model.g_model,
        op.members().iter().map(|&x| c_members[x as usize]).collect(),
    );

    let t_sub = pair.t_sub();
    let displayed_identity = if datum.u == t_sub {
        Some(check_displayed_identity(pair, datum, model, &k_group)?)
    } else {
        None
    };
    Ok(LocalKGroups {
        c_group,
        k_group,
        displayed_identity,
    })
}

/// O^p(Aut_{C_F(T)}(X)) = Aut_{K(T,X)}(X), checked through the embeddings.
fn check_displayed_identity(
    pair: &NormalPair,
    datum: &LocalDatum,
    model: &LocalModel,
    k_group: &Subgroup,
) -> Result<bool> {
    let p = pair.f.prime();
    if datum.x.is_trivial() {
        // Both sides are the trivial automorphism group of the trivial group.
        return Ok(true);
    }
    // LHS: O^p(Aut_{C_F(T)}(X)) inside the realized C_F(T).
    let (cft, cft_members) = super::realized_cft(pair)?;
    let to_cft = |s: Elem| -> Elem {
        cft_members
            .iter()
            .position(|&m| m == s)
            .expect("X inside C_S(T)") as Elem
    };
    let x_cft = cft.subgroup_from_members(datum.x.members().iter().map(|&s| to_cft(s)).collect());
    let auts = cft.aut_f(&x_cft);
    let (aut_table, aut_morphs) = crate::fusion::morphisms_as_group(&auts)?;
    let op_aut = residual_subgroup(&aut_table, p, ResidualKind::OpUpper);
    // Image tuples on X in S-coordinates.
    let lhs: BTreeSet<Vec<Elem>> = op_aut
        .members()
        .iter()
        .map(|&a| {
            aut_morphs[a as usize]
                .images()
                .iter()
                .map(|&xc| cft_members[xc as usize])
                .collect()
        })
        .collect();
    // RHS: Aut_{K(T,X)}(X) via the model embedding.
    let mut rhs: BTreeSet<Vec<Elem>> = BTreeSet::new();
    let x_model: Vec<Elem> = datum
        .x
        .members()
        .iter()
        .map(|&s| model.embed(s).expect("X embeds"))
        .collect();
    let x_model_sorted: BTreeSet<Elem> = x_model.iter().copied().collect();
    let back = |m: Elem| -> Option<Elem> {
        model
            .embedding
            .iter()
            .find(|&&(_, mm)| mm == m)
            .map(|&(s, _)| s)
    };
    for &k in k_group.members() {
        let images_model: Vec<Elem> = x_model.iter().map(|&x| model.g_model.conj(x, k)).collect();
        if images_model.iter().any(|m| !x_model_sorted.contains(m)) {
            continue;
        }
        let images_s: Option<Vec<Elem>> = images_model.iter().map(|&m| back(m)).collect();
        if let Some(tuple) = images_s {
            rhs.insert(tuple);
        }
    }
    Ok(lhs == rhs)
}
