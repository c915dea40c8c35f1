//! Centric linking systems of realized fusion systems, the conjugation
//! action of Aut_L(T) on a sub-linking-system, isotypical autoequivalences,
//! L-natural isomorphism, and the exact-sequence verification.
//!
//! A linking system here is always realized: the ambient group G supplies
//! coordinates, a normal witness subgroup H ≤ G supplies the morphisms
//! (H = G for the full system), and morphism sets are the right cosets
//! O_{p'}(C_H(P))·g over transporter elements g ∈ T_H(P,Q).  Composition is
//! left-to-right on witnesses: [g]·[h] = [gh].

mod functors;
mod theorem_a;

pub use functors::{
    conjugation_functor, enumerate_isotypical_autoequivalences, l_naturally_isomorphic,
    out_typ_classes, IsotypicalFunctor, LNaturalWitness,
};
pub use theorem_a::{kernel_of_conjugation, verify_theorem_a, Check3, KernelReport, TheoremAReport};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{p_part, residual_subgroup, subgroups_of_p_group, Elem, GroupTable, ResidualKind, Subgroup};

/// Object selection for `build_linking_system`.
pub enum ObjectPolicy {
    /// All F_S(H)-centric subgroups of S.
    AutoCentric,
    /// Explicit member lists in G-coordinates (sorted).
    Explicit(Vec<Vec<Elem>>),
}

pub struct LinkingSystem {
    g: Arc<GroupTable>,
    /// Morphism-witness subgroup (G itself for the ambient system).
    h: Subgroup,
    /// The p-group: S for the ambient system, T = S ∩ H for a subsystem.
    s: Subgroup,
    p: usize,
    /// Objects: subgroups of `s` in G-coordinates, sorted.
    objects: Vec<Subgroup>,
    /// O_{p'}(C_H(P)) per object.
    cperp: Vec<Subgroup>,
    /// Canonical coset representatives per ordered object pair.
    mor: BTreeMap<(usize, usize), Vec<Elem>>,
}

impl LinkingSystem {
    pub fn g(&self) -> &Arc<GroupTable> {
        &self.g
    }

    pub fn h(&self) -> &Subgroup {
        &self.h
    }

    pub fn s(&self) -> &Subgroup {
        &self.s
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn objects(&self) -> &[Subgroup] {
        &self.objects
    }

    pub fn object_index(&self, sub: &Subgroup) -> Option<usize> {
        self.objects.binary_search(sub).ok()
    }

    pub fn morphisms(&self, p_idx: usize, q_idx: usize) -> &[Elem] {
        self.mor
            .get(&(p_idx, q_idx))
            .map(|v| &v[..])
            .unwrap_or(&[])
    }

    /// O_{p'}(C_H(P)) for an arbitrary subgroup of S (recomputed when P is
    /// not an object).
    pub fn cperp_of(&self, p_sub: &Subgroup) -> Subgroup {
        if let Some(i) = self.object_index(p_sub) {
            return self.cperp[i].clone();
        }
        o_p_prime_of_centralizer(&self.g, &self.h, p_sub, self.p)
    }

    /// Canonical representative (minimum element) of O_{p'}(C_H(P))·w.
    pub fn canonical_rep(&self, p_sub: &Subgroup, witness: Elem) -> Elem {
        let cperp = self.cperp_of(p_sub);
        cperp
            .members()
            .iter()
            .map(|&c| self.g.mul(c, witness))
            .min()
            .expect("coset is nonempty")
    }

    fn canonical_rep_with(&self, cperp: &Subgroup, witness: Elem) -> Elem {
        cperp
            .members()
            .iter()
            .map(|&c| self.g.mul(c, witness))
            .min()
            .expect("coset is nonempty")
    }

    /// Extended morphism set Mor(P, Q) = T_H(P,Q) / O_{p'}(C_H(P)) for
    /// arbitrary subgroups of S.  Aut_L(T) is defined as
    /// T_G(T,T)/O_{p'}(C_G(T)) even when T is not an object; this computes
    /// such sets on demand.
    pub fn extended_morphisms(&self, p_sub: &Subgroup, q_sub: &Subgroup) -> Vec<Elem> {
        let cperp = self.cperp_of(p_sub);
        let mut reps: Vec<Elem> = Vec::new();
        let mut seen = vec![false; self.g.order()];
        for &k in self.h.members() {
            if seen[k as usize] {
                continue;
            }
            if p_sub.members().iter().all(|&x| q_sub.contains(self.g.conj(x, k))) {
                let rep = self.canonical_rep_with(&cperp, k);
                if !seen[rep as usize] {
                    reps.push(rep);
                }
                for &c in cperp.members() {
                    seen[self.g.mul(c, k) as usize] = true;
                }
            } else {
                seen[k as usize] = true;
            }
        }
        reps.sort_unstable();
        reps
    }

    /// Aut_L(P) as coset representatives, with a flag marking the extended
    /// (non-object) case.
    pub fn aut_l(&self, p_sub: &Subgroup) -> (Vec<Elem>, bool) {
        match self.object_index(p_sub) {
            Some(i) => (self.morphisms(i, i).to_vec(), false),
            None => (self.extended_morphisms(p_sub, p_sub), true),
        }
    }

    /// δ_P(g) for g ∈ N_H(P): the coset class of g in Aut_L(P).
    pub fn delta(&self, p_sub: &Subgroup, g_elem: Elem) -> Elem {
        debug_assert!(self.h.contains(g_elem));
        self.canonical_rep(p_sub, g_elem)
    }

    /// π([w]): the conjugation image tuple of w on P's members.
    pub fn pi(&self, p_sub: &Subgroup, witness: Elem) -> Vec<Elem> {
        p_sub
            .members()
            .iter()
            .map(|&x| self.g.conj(x, witness))
            .collect()
    }

    /// Aut_L(P) materialized as a group table; returns (table, sorted reps).
    /// The identity coset contains the group identity, hence has the
    /// smallest representative and lands at table index 0.
    pub fn aut_l_group(&self, p_sub: &Subgroup) -> Result<(Arc<GroupTable>, Vec<Elem>)> {
        let (reps, _) = self.aut_l(p_sub);
        let index: BTreeMap<Elem, usize> = reps.iter().copied().zip(0..).collect();
        let k = reps.len();
        let mut rows = vec![vec![0usize; k]; k];
        for a in 0..k {
            for b in 0..k {
                let prod = self.canonical_rep(p_sub, self.g.mul(reps[a], reps[b]));
                rows[a][b] = *index.get(&prod).ok_or(Error::IllDefinedComposition {
                    p: format!("{:?}", p_sub.members()),
                    q: format!("{:?}", p_sub.members()),
                    witness: prod as usize,
                })?;
            }
        }
        let table = GroupTable::from_table(rows)?;
        Ok((table, reps))
    }
}

fn o_p_prime_of_centralizer(
    g: &Arc<GroupTable>,
    h: &Subgroup,
    p_sub: &Subgroup,
    p: usize,
) -> Subgroup {
    let c_h = Subgroup::centralizer_in(h, p_sub);
    let (c_table, c_members) = c_h.as_group().expect("centralizer closes");
    let op = residual_subgroup(&c_table, p, ResidualKind::OpPrimeLower);
    Subgroup::from_members_unchecked(
        g,
        op.members().iter().map(|&x| c_members[x as usize]).collect(),
    )
}

/// Builds and fully verifies a linking system.
///
/// Checked here: `s` is Sylow-p in `h`; every object is p-centric in `h`
/// (C_H(P) = Z(P) × O_{p'}(C_H(P))); the object family is closed under
/// H-fusion; coset composition is representative-independent; the concrete
/// axiom (C) instance; the fiber equation over π.
pub fn build_linking_system(
    g: &Arc<GroupTable>,
    h_sub: &Subgroup,
    s_sub: &Subgroup,
    p: usize,
    policy: ObjectPolicy,
    caps: &Caps,
) -> Result<LinkingSystem> {
    if s_sub.order() != p_part(h_sub.order(), p) {
        return Err(Error::Precondition(format!(
            "S of order {} is not Sylow-{} in the witness subgroup of order {}",
            s_sub.order(),
            p,
            h_sub.order()
        )));
    }
    let (s_table, s_members) = s_sub.as_group()?;
    let lattice = subgroups_of_p_group(&s_table, p, caps)?;
    let all_subs: Vec<Subgroup> = lattice
        .iter()
        .map(|sub| {
            Subgroup::from_members_unchecked(
                g,
                sub.members().iter().map(|&x| s_members[x as usize]).collect(),
            )
        })
        .collect();

    let mut objects: Vec<Subgroup> = match policy {
        ObjectPolicy::AutoCentric => all_subs
            .iter()
            .filter(|cand| is_fusion_centric(g, h_sub, s_sub, cand))
            .cloned()
            .collect(),
        ObjectPolicy::Explicit(lists) => lists
            .into_iter()
            .map(|members| Subgroup::from_members_unchecked(g, members))
            .collect(),
    };
    objects.sort();
    objects.dedup();
    if objects.is_empty() {
        return Err(Error::Precondition("linking system needs at least one object".into()));
    }

    let mut cperp = Vec::with_capacity(objects.len());
    for obj in &objects {
        let c_h = Subgroup::centralizer_in(h_sub, obj);
        let z = Subgroup::centralizer_in(obj, obj);
        let opp = o_p_prime_of_centralizer(g, h_sub, obj, p);
        if z.order() * opp.order() != c_h.order() {
            return Err(Error::NotPCentric {
                object: format!("{:?}", obj.members()),
                centralizer_order: c_h.order(),
                split_order: z.order() * opp.order(),
            });
        }
        cperp.push(opp);
    }

    for obj in &objects {
        for &k in h_sub.members() {
            let conj = obj.conjugate(k);
            if s_sub.contains_subgroup(&conj) && objects.binary_search(&conj).is_err() {
                return Err(Error::Precondition(format!(
                    "object family not closed under fusion: {:?}^{} leaves it",
                    obj.members(),
                    k
                )));
            }
        }
    }

    let mut mor: BTreeMap<(usize, usize), Vec<Elem>> = BTreeMap::new();
    for (pi, p_obj) in objects.iter().enumerate() {
        let cp = &cperp[pi];
        for (qi, q_obj) in objects.iter().enumerate() {
            let mut reps: Vec<Elem> = Vec::new();
            let mut seen = vec![false; g.order()];
            for &k in h_sub.members() {
                if seen[k as usize] {
                    continue;
                }
                if p_obj.members().iter().all(|&x| q_obj.contains(g.conj(x, k))) {
                    let rep = cp.members().iter().map(|&c| g.mul(c, k)).min().unwrap();
                    if !seen[rep as usize] {
                        reps.push(rep);
                    }
                    for &c in cp.members() {
                        seen[g.mul(c, k) as usize] = true;
                    }
                } else {
                    seen[k as usize] = true;
                }
            }
            if !reps.is_empty() {
                reps.sort_unstable();
                mor.insert((pi, qi), reps);
            }
        }
    }

    let system = LinkingSystem {
        g: Arc::clone(g),
        h: h_sub.clone(),
        s: s_sub.clone(),
        p,
        objects,
        cperp,
        mor,
    };
    verify_composition(&system)?;
    verify_axiom_c(&system)?;
    verify_fibers(&system)?;
    Ok(system)
}

/// Is P F_S(H)-centric: C_S(P') ≤ P' for every H-conjugate P' ≤ S?
fn is_fusion_centric(g: &Arc<GroupTable>, h_sub: &Subgroup, s_sub: &Subgroup, p_sub: &Subgroup) -> bool {
    let mut seen: std::collections::BTreeSet<Vec<Elem>> = std::collections::BTreeSet::new();
    let gens = generating_members(h_sub, g);
    let start = p_sub.members().to_vec();
    seen.insert(start.clone());
    let mut frontier = vec![start];
    while let Some(cur) = frontier.pop() {
        if cur.iter().all(|&x| s_sub.contains(x)) {
            let sub = Subgroup::from_members_unchecked(g, cur.clone());
            let c_s = Subgroup::centralizer_in(s_sub, &sub);
            if !sub.contains_subgroup(&c_s) {
                return false;
            }
        }
        for &k in &gens {
            let mut next: Vec<Elem> = cur.iter().map(|&x| g.conj(x, k)).collect();
            next.sort_unstable();
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    true
}

/// Small generating set of a subgroup (greedy over its own elements).
pub(crate) fn generating_members(h_sub: &Subgroup, g: &Arc<GroupTable>) -> Vec<Elem> {
    let mut gens: Vec<Elem> = Vec::new();
    let mut closed = Subgroup::generated(g, &[]);
    for &x in h_sub.members() {
        if !closed.contains(x) {
            gens.push(x);
            closed = Subgroup::generated(g, &gens);
            if closed.order() == h_sub.order() {
                break;
            }
        }
    }
    gens
}

/// Representative-independence of composition: for composable (P,Q) it is
/// enough that w·O_{p'}(C_H(Q))·w⁻¹ ⊆ O_{p'}(C_H(P)) for every witness w.
fn verify_composition(l: &LinkingSystem) -> Result<()> {
    let g = &l.g;
    for (&(pi, qi), reps) in &l.mor {
        let cp = &l.cperp[pi];
        let cq = &l.cperp[qi];
        for &w in reps {
            for &c in cq.members() {
                let conj = g.mul(g.mul(w, c), g.inv(w));
                if !cp.contains(conj) {
                    return Err(Error::IllDefinedComposition {
                        p: format!("{:?}", l.objects[pi].members()),
                        q: format!("{:?}", l.objects[qi].members()),
                        witness: w as usize,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Axiom (C) in concrete coset form: for [f]: P → Q and g ∈ P,
/// [g·f] = [f·(g c_f)].
fn verify_axiom_c(l: &LinkingSystem) -> Result<()> {
    let g_table = &l.g;
    for (&(pi, _qi), reps) in &l.mor {
        let p_obj = &l.objects[pi];
        for &f in reps {
            for &x in p_obj.members() {
                let lhs = l.canonical_rep(p_obj, g_table.mul(x, f));
                let rhs = l.canonical_rep(p_obj, g_table.mul(f, g_table.conj(x, f)));
                if lhs != rhs {
                    return Err(Error::ModelVerification {
                        axiom: "axiom (C)",
                        detail: format!("fails at witness {f} and element {x}"),
                    });
                }
            }
        }
    }
    Ok(())
}

/// |Mor(P,Q)| · |O_{p'}(C_H(P))| = |Hom(P,Q)| · |C_H(P)|.
fn verify_fibers(l: &LinkingSystem) -> Result<()> {
    let g = &l.g;
    for (&(pi, qi), reps) in &l.mor {
        let p_obj = &l.objects[pi];
        let q_obj = &l.objects[qi];
        let c_h = Subgroup::centralizer_in(&l.h, p_obj);
        let transporter = l
            .h
            .members()
            .iter()
            .filter(|&&k| p_obj.members().iter().all(|&x| q_obj.contains(g.conj(x, k))))
            .count();
        let hom_count = transporter / c_h.order();
        if reps.len() * l.cperp[pi].order() != hom_count * c_h.order() {
            return Err(Error::ModelVerification {
                axiom: "fiber equation",
                detail: format!(
                    "pair ({pi}, {qi}): {} cosets, {} homs",
                    reps.len(),
                    hom_count
                ),
            });
        }
    }
    Ok(())
}
