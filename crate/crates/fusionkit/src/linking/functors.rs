//! Functors on a sub-linking-system: the conjugation functors c_γ, the
//! enumeration of isotypical autoequivalences, and L-natural isomorphism.

use std::collections::{BTreeMap, BTreeSet};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{isomorphisms_between, Elem};

use super::LinkingSystem;

/// A self-functor of a sub-linking-system, stored as the object permutation
/// and the total map on morphism representatives.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct IsotypicalFunctor {
    pub object_map: Vec<usize>,
    /// ((source object, target object), rep) -> image rep (a morphism
    /// between the image objects).
    pub morphism_map: BTreeMap<(usize, usize, Elem), Elem>,
    pub sends_inclusions_to_inclusions: bool,
}

impl std::fmt::Debug for IsotypicalFunctor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "IsotypicalFunctor(objects {:?})", self.object_map)
    }
}

impl IsotypicalFunctor {
    pub fn identity(l0: &LinkingSystem) -> IsotypicalFunctor {
        let mut morphism_map = BTreeMap::new();
        for pi in 0..l0.objects().len() {
            for qi in 0..l0.objects().len() {
                for &w in l0.morphisms(pi, qi) {
                    morphism_map.insert((pi, qi, w), w);
                }
            }
        }
        IsotypicalFunctor {
            object_map: (0..l0.objects().len()).collect(),
            morphism_map,
            sends_inclusions_to_inclusions: true,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.object_map.iter().enumerate().all(|(i, &j)| i == j)
            && self.morphism_map.iter().all(|(&(_, _, w), &im)| w == im)
    }

    /// Left-to-right composition: `self` then `other`.
    pub fn then(&self, other: &IsotypicalFunctor) -> IsotypicalFunctor {
        let object_map: Vec<usize> = self.object_map.iter().map(|&i| other.object_map[i]).collect();
        let mut morphism_map = BTreeMap::new();
        for (&(pi, qi, w), &im) in &self.morphism_map {
            let (pj, qj) = (self.object_map[pi], self.object_map[qi]);
            let im2 = other.morphism_map[&(pj, qj, im)];
            morphism_map.insert((pi, qi, w), im2);
        }
        IsotypicalFunctor {
            object_map,
            morphism_map,
            sends_inclusions_to_inclusions: self.sends_inclusions_to_inclusions
                && other.sends_inclusions_to_inclusions,
        }
    }
}

/// The conjugation functor c_γ on L_0 for γ ∈ Aut_L(T) with representative
/// `t_rep`: objects P ↦ Pπ(γ), morphisms [w] ↦ [t⁻¹wt].  Fails if π(γ) does
/// not stabilize the object family (the weak-normality surrogate), and
/// verifies functoriality, isotypicality and inclusion preservation by scan.
pub fn conjugation_functor(
    l: &LinkingSystem,
    l0: &LinkingSystem,
    t_rep: Elem,
) -> Result<IsotypicalFunctor> {
    let g = l.g();
    let n = l0.objects().len();
    let mut object_map = vec![usize::MAX; n];
    for (i, obj) in l0.objects().iter().enumerate() {
        let image = obj.conjugate(t_rep);
        object_map[i] = l0.object_index(&image).ok_or_else(|| {
            Error::Precondition(format!(
                "π(γ) for witness {t_rep} does not stabilize the object family"
            ))
        })?;
    }
    let mut morphism_map = BTreeMap::new();
    for pi in 0..n {
        for qi in 0..n {
            for &w in l0.morphisms(pi, qi) {
                let conj = g.conj(w, t_rep);
                if !l0.h().contains(conj) {
                    return Err(Error::Precondition(format!(
                        "witness {w} conjugated by {t_rep} leaves the subsystem"
                    )));
                }
                let image = l0.canonical_rep(&l0.objects()[object_map[pi]], conj);
                morphism_map.insert((pi, qi, w), image);
            }
        }
    }
    let functor = IsotypicalFunctor {
        object_map,
        morphism_map,
        sends_inclusions_to_inclusions: true,
    };
    verify_functor(l0, &functor, true)?;
    Ok(functor)
}

/// Scans functoriality, isotypicality, and (when `need_inclusions`) that
/// inclusions map to inclusions.
pub(crate) fn verify_functor(
    l0: &LinkingSystem,
    functor: &IsotypicalFunctor,
    need_inclusions: bool,
) -> Result<()> {
    let g = l0.g();
    let n = l0.objects().len();
    // Identities and composition.
    for pi in 0..n {
        let p_obj = &l0.objects()[pi];
        let id_rep = l0.canonical_rep(p_obj, g.identity());
        let p_im = &l0.objects()[functor.object_map[pi]];
        if functor.morphism_map[&(pi, pi, id_rep)] != l0.canonical_rep(p_im, g.identity()) {
            return Err(Error::ModelVerification {
                axiom: "functor preserves identities",
                detail: format!("object {pi}"),
            });
        }
        for qi in 0..n {
            for &w in l0.morphisms(pi, qi) {
                for ri in 0..n {
                    for &v in l0.morphisms(qi, ri) {
                        let composed = l0.canonical_rep(p_obj, g.mul(w, v));
                        let lhs = functor.morphism_map[&(pi, ri, composed)];
                        let rhs = l0.canonical_rep(
                            p_im,
                            g.mul(
                                functor.morphism_map[&(pi, qi, w)],
                                functor.morphism_map[&(qi, ri, v)],
                            ),
                        );
                        if lhs != rhs {
                            return Err(Error::ModelVerification {
                                axiom: "functoriality",
                                detail: format!("pair ({pi},{qi},{ri}) at witnesses ({w},{v})"),
                            });
                        }
                    }
                }
            }
        }
    }
    // Isotypicality: δ_P(P) maps onto δ_{P'}(P') elementwise.
    for pi in 0..n {
        let p_obj = &l0.objects()[pi];
        let p_im = &l0.objects()[functor.object_map[pi]];
        let delta_im: BTreeSet<Elem> = p_im
            .members()
            .iter()
            .map(|&x| l0.canonical_rep(p_im, x))
            .collect();
        for &x in p_obj.members() {
            let image = functor.morphism_map[&(pi, pi, l0.canonical_rep(p_obj, x))];
            if !delta_im.contains(&image) {
                return Err(Error::ModelVerification {
                    axiom: "isotypicality",
                    detail: format!("δ image of {x} at object {pi} leaves δ(P')"),
                });
            }
        }
    }
    if need_inclusions {
        for pi in 0..n {
            for qi in 0..n {
                if pi == qi || !l0.objects()[qi].contains_subgroup(&l0.objects()[pi]) {
                    continue;
                }
                let p_obj = &l0.objects()[pi];
                let incl = l0.canonical_rep(p_obj, g.identity());
                let p_im = &l0.objects()[functor.object_map[pi]];
                let q_im = &l0.objects()[functor.object_map[qi]];
                if !q_im.contains_subgroup(p_im) {
                    return Err(Error::ModelVerification {
                        axiom: "inclusion preservation",
                        detail: format!("objects ({pi}, {qi})"),
                    });
                }
                if functor.morphism_map[&(pi, qi, incl)] != l0.canonical_rep(p_im, g.identity()) {
                    return Err(Error::ModelVerification {
                        axiom: "inclusion preservation",
                        detail: format!("inclusion at ({pi}, {qi})"),
                    });
                }
            }
        }
    }
    Ok(())
}

/// All isotypical autoequivalences of `l0` (with bijective object maps),
/// optionally restricted to those sending inclusions to inclusions.
/// Backtracks over object bijections, per-class automorphism-group
/// isomorphisms, reference-iso images and (when inclusions are free)
/// inclusion images; every assembled candidate counts against the cap.
pub fn enumerate_isotypical_autoequivalences(
    l0: &LinkingSystem,
    require_inclusions: bool,
    caps: &Caps,
) -> Result<Vec<IsotypicalFunctor>> {
    let n = l0.objects().len();
    if n > caps.max_functor_objects {
        return Err(Error::CapExceeded {
            what: "functor-enumeration objects",
            limit: caps.max_functor_objects,
            actual: n,
        });
    }
    // Iso-classes of objects.
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if class_of[i] != usize::MAX {
            continue;
        }
        let ci = classes.len();
        let mut class = vec![i];
        class_of[i] = ci;
        for j in 0..n {
            if j != i
                && l0.objects()[j].order() == l0.objects()[i].order()
                && !l0.morphisms(i, j).is_empty()
            {
                class_of[j] = ci;
                class.push(j);
            }
        }
        classes.push(class);
    }

    let profile = |i: usize| -> (usize, usize, usize) {
        (
            l0.objects()[i].order(),
            l0.morphisms(i, i).len(),
            (0..n).map(|j| l0.morphisms(i, j).len()).sum(),
        )
    };
    let profiles: Vec<(usize, usize, usize)> = (0..n).map(profile).collect();

    let mut state = EnumState {
        l0,
        classes: &classes,
        class_of: &class_of,
        profiles: &profiles,
        require_inclusions,
        cap: caps.max_functor_candidates,
        candidates: 0,
        out: BTreeSet::new(),
    };
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    state.object_backtrack(&mut sigma, &mut used, 0)?;
    Ok(state.out.into_iter().collect())
}

struct ClassData {
    rep: usize,
    members: Vec<usize>,
    /// Canonical reference iso rep -> members[i], from the class rep.
    ref_isos: Vec<Elem>,
    /// Candidate group isomorphisms Aut(rep) -> Aut(σ rep) mapping δ(rep)
    /// onto δ(σ rep), keyed by coset rep.
    aut_isos: Vec<BTreeMap<Elem, Elem>>,
    /// Candidate images for each reference iso.
    e_candidates: Vec<Vec<Elem>>,
}

struct EnumState<'a> {
    l0: &'a LinkingSystem,
    classes: &'a [Vec<usize>],
    class_of: &'a [usize],
    profiles: &'a [(usize, usize, usize)],
    require_inclusions: bool,
    cap: usize,
    candidates: usize,
    out: BTreeSet<IsotypicalFunctor>,
}

impl<'a> EnumState<'a> {
    fn object_backtrack(&mut self, sigma: &mut Vec<usize>, used: &mut Vec<bool>, next: usize) -> Result<()> {
        let n = sigma.len();
        if next == n {
            for class in self.classes {
                let images: BTreeSet<usize> = class.iter().map(|&i| self.class_of[sigma[i]]).collect();
                if images.len() != 1 {
                    return Ok(());
                }
            }
            if self.require_inclusions {
                for p in 0..n {
                    for q in 0..n {
                        let inc = self.l0.objects()[q].contains_subgroup(&self.l0.objects()[p]);
                        let inc_im =
                            self.l0.objects()[sigma[q]].contains_subgroup(&self.l0.objects()[sigma[p]]);
                        if inc != inc_im {
                            return Ok(());
                        }
                    }
                }
            }
            let data = self.class_data(sigma)?;
            if data.iter().any(|d| d.aut_isos.is_empty()) {
                return Ok(());
            }
            let mut choice_auts = vec![0usize; data.len()];
            let mut choice_es: Vec<Vec<usize>> = data.iter().map(|d| vec![0; d.members.len()]).collect();
            return self.choice_backtrack(sigma, &data, &mut choice_auts, &mut choice_es, 0);
        }
        for cand in 0..n {
            if used[cand] || self.profiles[cand] != self.profiles[next] {
                continue;
            }
            sigma[next] = cand;
            used[cand] = true;
            self.object_backtrack(sigma, used, next + 1)?;
            used[cand] = false;
            sigma[next] = usize::MAX;
        }
        Ok(())
    }

    fn class_data(&self, sigma: &[usize]) -> Result<Vec<ClassData>> {
        let l0 = self.l0;
        let mut data = Vec::new();
        for class in self.classes {
            let rep = *class.iter().min().unwrap();
            let members: Vec<usize> = class.to_vec();
            let ref_isos: Vec<Elem> = members.iter().map(|&i| l0.morphisms(rep, i)[0]).collect();
            let (a_table, a_reps) = l0.aut_l_group(&l0.objects()[rep])?;
            let (b_table, b_reps) = l0.aut_l_group(&l0.objects()[sigma[rep]])?;
            let isos = isomorphisms_between(&a_table, &b_table);
            let delta_a: Vec<Elem> = l0.objects()[rep]
                .members()
                .iter()
                .map(|&x| l0.canonical_rep(&l0.objects()[rep], x))
                .collect();
            let delta_b: BTreeSet<Elem> = l0.objects()[sigma[rep]]
                .members()
                .iter()
                .map(|&x| l0.canonical_rep(&l0.objects()[sigma[rep]], x))
                .collect();
            let rep_pos: BTreeMap<Elem, usize> =
                a_reps.iter().copied().enumerate().map(|(i, r)| (r, i)).collect();
            let aut_isos: Vec<BTreeMap<Elem, Elem>> = isos
                .into_iter()
                .filter(|map| {
                    delta_a
                        .iter()
                        .all(|d| delta_b.contains(&b_reps[map[rep_pos[d]] as usize]))
                })
                .map(|map| {
                    a_reps
                        .iter()
                        .enumerate()
                        .map(|(i, &r)| (r, b_reps[map[i] as usize]))
                        .collect()
                })
                .collect();
            let e_candidates: Vec<Vec<Elem>> = members
                .iter()
                .map(|&i| l0.morphisms(sigma[rep], sigma[i]).to_vec())
                .collect();
            data.push(ClassData {
                rep,
                members,
                ref_isos,
                aut_isos,
                e_candidates,
            });
        }
        Ok(data)
    }

    /// Product over per-class choices: an Aut-iso per class, then an image
    /// rep for every reference iso.
    fn choice_backtrack(
        &mut self,
        sigma: &[usize],
        data: &[ClassData],
        choice_auts: &mut Vec<usize>,
        choice_es: &mut Vec<Vec<usize>>,
        class_idx: usize,
    ) -> Result<()> {
        if class_idx == data.len() {
            return self.assemble(sigma, data, choice_auts, choice_es);
        }
        for ai in 0..data[class_idx].aut_isos.len() {
            choice_auts[class_idx] = ai;
            self.member_backtrack(sigma, data, choice_auts, choice_es, class_idx, 0)?;
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn member_backtrack(
        &mut self,
        sigma: &[usize],
        data: &[ClassData],
        choice_auts: &mut Vec<usize>,
        choice_es: &mut Vec<Vec<usize>>,
        class_idx: usize,
        member_idx: usize,
    ) -> Result<()> {
        if member_idx == data[class_idx].members.len() {
            return self.choice_backtrack(sigma, data, choice_auts, choice_es, class_idx + 1);
        }
        for ei in 0..data[class_idx].e_candidates[member_idx].len() {
            choice_es[class_idx][member_idx] = ei;
            self.member_backtrack(sigma, data, choice_auts, choice_es, class_idx, member_idx + 1)?;
        }
        Ok(())
    }

    fn assemble(
        &mut self,
        sigma: &[usize],
        data: &[ClassData],
        choice_auts: &[usize],
        choice_es: &[Vec<usize>],
    ) -> Result<()> {
        self.candidates += 1;
        if self.candidates > self.cap {
            return Err(Error::CapExceeded {
                what: "functor-enumeration candidates",
                limit: self.cap,
                actual: self.candidates,
            });
        }
        let l0 = self.l0;
        let g = l0.g();
        let n = sigma.len();
        let mut e_of: Vec<Elem> = vec![0; n];
        let mut ref_of: Vec<Elem> = vec![0; n];
        let mut aut_map_of: Vec<&BTreeMap<Elem, Elem>> = Vec::with_capacity(n);
        let mut rep_of: Vec<usize> = vec![0; n];
        for _ in 0..n {
            aut_map_of.push(&data[0].aut_isos[choice_auts[0]]);
        }
        for (ci, d) in data.iter().enumerate() {
            for (mi, &obj) in d.members.iter().enumerate() {
                e_of[obj] = d.e_candidates[mi][choice_es[ci][mi]];
                ref_of[obj] = d.ref_isos[mi];
                aut_map_of[obj] = &d.aut_isos[choice_auts[ci]];
                rep_of[obj] = d.rep;
            }
        }
        // Derive the total morphism map by factoring each [w]: P → Q into
        // the iso P → P^w and the inclusion P^w ≤ Q.
        let mut morphism_map = BTreeMap::new();
        for pi in 0..n {
            let p_obj = &l0.objects()[pi];
            for qi in 0..n {
                for &w in l0.morphisms(pi, qi) {
                    let image_sub = p_obj.conjugate(w);
                    let ii = match l0.object_index(&image_sub) {
                        Some(i) => i,
                        None => return Ok(()),
                    };
                    let rep_obj = &l0.objects()[rep_of[pi]];
                    let v = l0.canonical_rep(rep_obj, g.mul(g.mul(ref_of[pi], w), g.inv(ref_of[ii])));
                    let v_im = match aut_map_of[pi].get(&v) {
                        Some(&x) => x,
                        None => return Ok(()),
                    };
                    let iso_witness = g.mul(g.mul(g.inv(e_of[pi]), v_im), e_of[ii]);
                    if !l0.objects()[sigma[qi]].contains_subgroup(&l0.objects()[sigma[ii]]) {
                        return Ok(());
                    }
                    if !l0.h().contains(iso_witness) {
                        return Ok(());
                    }
                    let sp = &l0.objects()[sigma[pi]];
                    if !sp
                        .members()
                        .iter()
                        .all(|&x| l0.objects()[sigma[qi]].contains(g.conj(x, iso_witness)))
                    {
                        return Ok(());
                    }
                    morphism_map.insert((pi, qi, w), l0.canonical_rep(sp, iso_witness));
                }
            }
        }
        let functor = IsotypicalFunctor {
            object_map: sigma.to_vec(),
            morphism_map,
            sends_inclusions_to_inclusions: true,
        };
        if verify_functor(l0, &functor, self.require_inclusions).is_ok() {
            self.out.insert(functor);
        }
        Ok(())
    }
}

/// A per-object family of L-morphisms witnessing an L-natural isomorphism.
#[derive(Debug, Clone)]
pub struct LNaturalWitness {
    /// (object index in L_0, witness element of G).
    pub eta: Vec<(usize, Elem)>,
}

/// Searches for an L-natural isomorphism from `alpha` to `beta`: per-object
/// η_R ∈ Hom_L(α(R), β(R)) with all naturality squares commuting.  The
/// component morphisms live in the ambient system L, so witnesses range over
/// ambient transporters.  Returns a definitive answer (finite search).
pub fn l_naturally_isomorphic(
    l: &LinkingSystem,
    l0: &LinkingSystem,
    alpha: &IsotypicalFunctor,
    beta: &IsotypicalFunctor,
) -> Option<LNaturalWitness> {
    let g = l.g();
    let n = l0.objects().len();
    // T is the unique maximal object; functors fix it.
    let t_idx = (0..n)
        .max_by_key(|&i| l0.objects()[i].order())
        .expect("nonempty object set");
    let alpha_t = &l0.objects()[alpha.object_map[t_idx]];
    let beta_t = &l0.objects()[beta.object_map[t_idx]];
    // Candidates for η_T: ambient transporter elements.
    let eta_t_candidates: Vec<Elem> = (0..g.order() as Elem)
        .filter(|&k| alpha_t.members().iter().all(|&x| beta_t.contains(g.conj(x, k))))
        .collect();
    'outer: for &eta_t in &eta_t_candidates {
        let mut eta = vec![Elem::MAX; n];
        eta[t_idx] = eta_t;
        // Derive candidates for every other object from its inclusion into T.
        for ri in 0..n {
            if ri == t_idx {
                continue;
            }
            let incl = l0.canonical_rep(&l0.objects()[ri], g.identity());
            let a = alpha.morphism_map[&(ri, t_idx, incl)];
            let b = beta.morphism_map[&(ri, t_idx, incl)];
            let alpha_r = &l0.objects()[alpha.object_map[ri]];
            let beta_r = &l0.objects()[beta.object_map[ri]];
            // Square: a · η_T ≡ η_R · b  (mod O_{p'}(C_G(αR))), so
            // η_R ∈ C'_G(αR) · a · η_T · b⁻¹, intersected with the
            // transporter of αR into βR.
            let cperp = l.cperp_of(alpha_r);
            let base = g.mul(g.mul(a, eta_t), g.inv(b));
            let found = cperp.members().iter().map(|&c| g.mul(c, base)).find(|&cand| {
                alpha_r
                    .members()
                    .iter()
                    .all(|&x| beta_r.contains(g.conj(x, cand)))
            });
            match found {
                Some(e) => eta[ri] = e,
                None => continue 'outer,
            }
        }
        // Verify every square.
        let mut all_ok = true;
        'verify: for pi in 0..n {
            for qi in 0..n {
                for &w in l0.morphisms(pi, qi) {
                    let a = alpha.morphism_map[&(pi, qi, w)];
                    let b = beta.morphism_map[&(pi, qi, w)];
                    let alpha_p = &l0.objects()[alpha.object_map[pi]];
                    let lhs = g.mul(a, eta[qi]);
                    let rhs = g.mul(eta[pi], b);
                    // Equality as C'_G(αP)-cosets.
                    let cperp = l.cperp_of(alpha_p);
                    let diff = g.mul(lhs, g.inv(rhs));
                    if !cperp.contains(diff) {
                        all_ok = false;
                        break 'verify;
                    }
                }
            }
        }
        if all_ok {
            return Some(LNaturalWitness {
                eta: eta.into_iter().enumerate().map(|(i, e)| (i, e)).collect(),
            });
        }
    }
    None
}

/// Partition of a functor list into L-natural-isomorphism classes
/// (Out_typ^L-style classes); returns index lists.
pub fn out_typ_classes(
    l: &LinkingSystem,
    l0: &LinkingSystem,
    functors: &[IsotypicalFunctor],
) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, f) in functors.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            let rep = &functors[class[0]];
            if l_naturally_isomorphic(l, l0, rep, f).is_some() {
                class.push(i);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![i]);
        }
    }
    classes
}
