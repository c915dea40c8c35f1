//! The [`FusionSystem`] type: realized fusion systems `F_S(G)` and abstract
//! systems given by explicit hom-set tables, together with the classifiers
//! (fully normalized / centralized / automized, receptive, centric), the
//! saturation checker and the invariance / normality checker for pairs.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde_json::json;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{
    p_part, subgroups_of_p_group, Elem, GroupMorphism, GroupTable, Subgroup,
};

/// A fusion morphism: an injective homomorphism between subgroups of S,
/// stored as the total image map on the sorted source member list
/// (S-element indices on both sides).
pub type Morphism = GroupMorphism;

pub type SubId = usize;

/// The subgroup lattice of S with canonical ids.
pub struct Lattice {
    pub subs: Vec<Subgroup>,
    index: HashMap<Arc<Vec<Elem>>, SubId>,
}

impl Lattice {
    fn new(subs: Vec<Subgroup>) -> Lattice {
        let index = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.members_arc(), i))
            .collect();
        Lattice { subs, index }
    }

    pub fn id_of(&self, sub: &Subgroup) -> SubId {
        *self
            .index
            .get(&sub.members_arc())
            .unwrap_or_else(|| panic!("subgroup of order {} missing from lattice", sub.order()))
    }

    pub fn get(&self, id: SubId) -> &Subgroup {
        &self.subs[id]
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }
}

enum Flavor {
    /// `F_S(G)`: morphisms are conjugations by elements of G.
    Realized {
        g: Arc<GroupTable>,
        /// S-element index -> G-element index (strictly increasing).
        embed: Arc<Vec<Elem>>,
    },
    /// Explicit hom-set tables over all ordered pairs of subgroups of S.
    Abstract {
        homs: BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>>,
    },
}

pub struct FusionSystem {
    s: Arc<GroupTable>,
    p: usize,
    caps: Caps,
    flavor: Flavor,
    lattice: OnceLock<Arc<Lattice>>,
    classes: OnceLock<Arc<Vec<Vec<SubId>>>>,
    class_of: OnceLock<Arc<Vec<usize>>>,
    hom_cache: Mutex<HashMap<(SubId, SubId), Arc<Vec<Morphism>>>>,
}

impl FusionSystem {
    /// The realized system `F_S(G)` for `S` given by its member list in `G`.
    /// `S` need not be Sylow (sub-systems of intermediate subgroups reuse
    /// this), but every standard constructor passes a Sylow subgroup.
    pub fn realized(g: &Arc<GroupTable>, s_in_g: &Subgroup, p: usize, caps: Caps) -> Result<FusionSystem> {
        let (s_table, embed) = s_in_g.as_group()?;
        if s_table.order() != p_part(s_table.order(), p) {
            return Err(Error::Precondition(format!(
                "underlying subgroup of order {} is not a {}-group",
                s_table.order(),
                p
            )));
        }
        Ok(FusionSystem {
            s: s_table,
            p,
            caps,
            flavor: Flavor::Realized {
                g: Arc::clone(g),
                embed: Arc::new(embed),
            },
            lattice: OnceLock::new(),
            classes: OnceLock::new(),
            class_of: OnceLock::new(),
            hom_cache: Mutex::new(HashMap::new()),
        })
    }

    /// An abstract system from complete hom-set tables.  Closure properties
    /// are verified when `validate` is set.
    pub fn abstract_system(
        s: Arc<GroupTable>,
        p: usize,
        caps: Caps,
        homs: BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>>,
        validate: bool,
    ) -> Result<FusionSystem> {
        let sys = FusionSystem {
            s,
            p,
            caps,
            flavor: Flavor::Abstract { homs },
            lattice: OnceLock::new(),
            classes: OnceLock::new(),
            class_of: OnceLock::new(),
            hom_cache: Mutex::new(HashMap::new()),
        };
        if validate {
            sys.validate_abstract()?;
        }
        Ok(sys)
    }

    pub fn s_table(&self) -> &Arc<GroupTable> {
        &self.s
    }

    pub fn prime(&self) -> usize {
        self.p
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn is_realized(&self) -> bool {
        matches!(self.flavor, Flavor::Realized { .. })
    }

    pub fn ambient_group(&self) -> Option<(&Arc<GroupTable>, &Arc<Vec<Elem>>)> {
        match &self.flavor {
            Flavor::Realized { g, embed } => Some((g, embed)),
            Flavor::Abstract { .. } => None,
        }
    }

    /// S as a subgroup of its own table.
    pub fn full(&self) -> Subgroup {
        self.s.full_subgroup()
    }

    pub fn lattice(&self) -> Arc<Lattice> {
        Arc::clone(self.lattice.get_or_init(|| {
            let subs = subgroups_of_p_group(&self.s, self.p, &self.caps)
                .expect("subgroup lattice within caps");
            Arc::new(Lattice::new(subs))
        }))
    }

    pub fn subgroup_from_members(&self, members: Vec<Elem>) -> Subgroup {
        Subgroup::from_members_unchecked(&self.s, members)
    }

    /// Hom_F(P, Q), deterministically ordered by image tuple.
    pub fn hom_set(&self, p_sub: &Subgroup, q_sub: &Subgroup) -> Arc<Vec<Morphism>> {
        let lattice = self.lattice();
        let key = (lattice.id_of(p_sub), lattice.id_of(q_sub));
        if let Some(cached) = self.hom_cache.lock().unwrap().get(&key) {
            return Arc::clone(cached);
        }
        let result: Arc<Vec<Morphism>> = match &self.flavor {
            Flavor::Realized { g, embed } => {
                Arc::new(realized_homs(g, embed, &self.s, p_sub, q_sub))
            }
            Flavor::Abstract { homs } => homs
                .get(&key)
                .cloned()
                .unwrap_or_else(|| Arc::new(Vec::new())),
        };
        self.hom_cache
            .lock()
            .unwrap()
            .entry(key)
            .or_insert_with(|| Arc::clone(&result));
        result
    }

    pub fn aut_f(&self, p_sub: &Subgroup) -> Arc<Vec<Morphism>> {
        self.hom_set(p_sub, p_sub)
    }

    /// Aut_S(P): conjugation maps by normalizer elements inside S.
    pub fn aut_s(&self, p_sub: &Subgroup) -> Vec<Morphism> {
        let n = Subgroup::normalizer_in(&self.full(), p_sub);
        let mut set: BTreeSet<Vec<Elem>> = BTreeSet::new();
        for &g in n.members() {
            set.insert(
                p_sub
                    .members()
                    .iter()
                    .map(|&x| self.s.conj(x, g))
                    .collect(),
            );
        }
        set.into_iter()
            .map(|images| Morphism::new(p_sub.members_arc(), images))
            .collect()
    }

    /// F-conjugacy classes of Sub(S), each sorted, ordered by smallest member.
    pub fn f_classes(&self) -> Arc<Vec<Vec<SubId>>> {
        Arc::clone(self.classes.get_or_init(|| {
            let lattice = self.lattice();
            let classes = match &self.flavor {
                Flavor::Realized { g, embed } => realized_classes(g, embed, &self.s, &lattice),
                Flavor::Abstract { homs } => abstract_classes(homs, &lattice),
            };
            Arc::new(classes)
        }))
    }

    pub fn class_index_of(&self, id: SubId) -> usize {
        let map = self.class_of.get_or_init(|| {
            let classes = self.f_classes();
            let mut of = vec![usize::MAX; self.lattice().len()];
            for (ci, class) in classes.iter().enumerate() {
                for &id in class {
                    of[id] = ci;
                }
            }
            Arc::new(of)
        });
        map[id]
    }

    pub fn f_class_of(&self, sub: &Subgroup) -> Vec<SubId> {
        let lattice = self.lattice();
        let classes = self.f_classes();
        classes[self.class_index_of(lattice.id_of(sub))].clone()
    }

    /// Does some F-morphism carry `p_sub` onto `q_sub`?
    pub fn is_f_conjugate(&self, p_sub: &Subgroup, q_sub: &Subgroup) -> bool {
        let lattice = self.lattice();
        self.class_index_of(lattice.id_of(p_sub)) == self.class_index_of(lattice.id_of(q_sub))
    }

    /// Strong closure: no element of X has an F-image outside X.
    pub fn is_strongly_closed(&self, x_sub: &Subgroup) -> bool {
        match &self.flavor {
            Flavor::Realized { g, embed } => {
                let rev = ReverseEmbed::new(g, embed);
                x_sub.members().iter().all(|&x| {
                    let gx = embed[x as usize];
                    (0..g.order() as Elem).all(|k| {
                        let image = g.conj(gx, k);
                        match rev.to_s(image) {
                            Some(sx) => x_sub.contains(sx),
                            None => true,
                        }
                    })
                })
            }
            Flavor::Abstract { .. } => {
                let full = self.full();
                x_sub.members().iter().all(|&x| {
                    let cyc = Subgroup::generated(&self.s, &[x]);
                    self.hom_set(&cyc, &full)
                        .iter()
                        .all(|m| x_sub.contains(m.apply(x)))
                })
            }
        }
    }

    /// Status flags for P (with T-centricity relative to `t_sub` when given).
    pub fn classify_subgroup(&self, p_sub: &Subgroup, t_sub: Option<&Subgroup>) -> SubgroupStatus {
        let full = self.full();
        let class = self.f_class_of(p_sub);
        let lattice = self.lattice();
        let ns = |id: SubId| Subgroup::normalizer_in(&full, lattice.get(id)).order();
        let cs = |id: SubId| Subgroup::centralizer_in(&full, lattice.get(id)).order();
        let my_id = lattice.id_of(p_sub);
        let max_n = class.iter().map(|&i| ns(i)).max().unwrap();
        let max_c = class.iter().map(|&i| cs(i)).max().unwrap();
        let aut_f_order = self.aut_f(p_sub).len();
        let aut_s_order = self.aut_s(p_sub).len();
        let f_centric = class
            .iter()
            .all(|&i| lattice.get(i).contains_subgroup(&Subgroup::centralizer_in(&full, lattice.get(i))));
        let t_centric = t_sub.map(|t| {
            class.iter().all(|&i| {
                let q = lattice.get(i);
                if !t.contains_subgroup(q) {
                    return true;
                }
                q.contains_subgroup(&Subgroup::centralizer_in(t, q))
            })
        });
        SubgroupStatus {
            fully_normalized: ns(my_id) == max_n,
            fully_centralized: cs(my_id) == max_c,
            fully_automized: aut_s_order == p_part(aut_f_order, self.p),
            receptive: self.is_receptive(p_sub),
            f_centric,
            t_centric,
        }
    }

    /// Receptivity: every F-isomorphism onto P extends to its N_φ.
    pub fn is_receptive(&self, p_sub: &Subgroup) -> bool {
        let lattice = self.lattice();
        let class = self.f_class_of(p_sub);
        for &src_id in &class {
            let src = lattice.get(src_id).clone();
            let isos = self.hom_set(&src, p_sub);
            for phi in isos.iter() {
                if !self.iso_extends_to_n_phi(&src, p_sub, phi) {
                    return false;
                }
            }
        }
        true
    }

    /// N_φ = {g ∈ N_S(P') : φ⁻¹ ∘ c_g ∘ φ ∈ Aut_S(P)} for φ: P' → P.
    pub fn n_phi(&self, src: &Subgroup, dst: &Subgroup, phi: &Morphism) -> Subgroup {
        let full = self.full();
        let n_src = Subgroup::normalizer_in(&full, src);
        let aut_s_dst: BTreeSet<Vec<Elem>> = self
            .aut_s(dst)
            .into_iter()
            .map(|m| m.images().to_vec())
            .collect();
        let phi_inv = phi.inverse();
        let members: Vec<Elem> = n_src
            .members()
            .iter()
            .copied()
            .filter(|&g| {
                let twisted: Vec<Elem> = dst
                    .members()
                    .iter()
                    .map(|&x| phi.apply(self.s.conj(phi_inv.apply(x), g)))
                    .collect();
                aut_s_dst.contains(&twisted)
            })
            .collect();
        self.subgroup_from_members(members)
    }

    fn iso_extends_to_n_phi(&self, src: &Subgroup, dst: &Subgroup, phi: &Morphism) -> bool {
        let n_phi = self.n_phi(src, dst, phi);
        self.morphism_extends_to(phi, src, &n_phi)
    }

    /// Does `phi` (defined on `src`) extend to some ψ ∈ Hom_F(`domain`, S)?
    pub fn morphism_extends_to(&self, phi: &Morphism, src: &Subgroup, domain: &Subgroup) -> bool {
        debug_assert!(domain.contains_subgroup(src));
        match &self.flavor {
            Flavor::Realized { g, embed } => {
                let rev = ReverseEmbed::new(g, embed);
                let src_g: Vec<Elem> = src.members().iter().map(|&x| embed[x as usize]).collect();
                let img_g: Vec<Elem> = phi.images().iter().map(|&x| embed[x as usize]).collect();
                let dom_g: Vec<Elem> = domain.members().iter().map(|&x| embed[x as usize]).collect();
                (0..g.order() as Elem).into_par_iter().any(|k| {
                    src_g
                        .iter()
                        .zip(img_g.iter())
                        .all(|(&x, &y)| g.conj(x, k) == y)
                        && dom_g.iter().all(|&x| rev.to_s(g.conj(x, k)).is_some())
                })
            }
            Flavor::Abstract { .. } => {
                let full = self.full();
                self.hom_set(domain, &full).iter().any(|psi| {
                    src.members()
                        .iter()
                        .all(|&x| psi.apply(x) == phi.apply(x))
                })
            }
        }
    }

    /// Saturation: every F-conjugacy class has a fully automized receptive
    /// member.  The certificate lists one witness per class, or the class
    /// that fails.
    pub fn is_saturated(&self) -> SaturationReport {
        let lattice = self.lattice();
        let classes = self.f_classes();
        let full = self.full();
        let per_class: Vec<(usize, Option<SubId>)> = classes
            .par_iter()
            .enumerate()
            .map(|(ci, class)| {
                // Candidates in deterministic order: fully normalized first.
                let mut members: Vec<SubId> = class.clone();
                members.sort_by_key(|&id| {
                    let n = Subgroup::normalizer_in(&full, lattice.get(id)).order();
                    (usize::MAX - n, lattice.get(id).members().to_vec())
                });
                for id in members {
                    let sub = lattice.get(id);
                    let aut_f_order = self.aut_f(sub).len();
                    let aut_s_order = self.aut_s(sub).len();
                    if aut_s_order != p_part(aut_f_order, self.p) {
                        continue;
                    }
                    if self.is_receptive(sub) {
                        return (ci, Some(id));
                    }
                }
                (ci, None)
            })
            .collect();
        let mut witnesses = Vec::new();
        for (ci, w) in per_class {
            match w {
                Some(id) => witnesses.push((ci, id)),
                None => {
                    return SaturationReport {
                        saturated: false,
                        witnesses,
                        failing_class: Some(classes[ci].clone()),
                    }
                }
            }
        }
        SaturationReport {
            saturated: true,
            witnesses,
            failing_class: None,
        }
    }

    /// Abstract-table invariants: identity and Inn-closure, injective
    /// homomorphisms, closure under composition, restriction and inverses of
    /// isomorphisms.
    fn validate_abstract(&self) -> Result<()> {
        let lattice = self.lattice();
        let homs = match &self.flavor {
            Flavor::Abstract { homs } => homs,
            Flavor::Realized { .. } => unreachable!(),
        };
        let get = |p: SubId, q: SubId| -> Arc<Vec<Morphism>> {
            homs.get(&(p, q)).cloned().unwrap_or_else(|| Arc::new(Vec::new()))
        };
        // Inn-closure and identities.
        for p_id in 0..lattice.len() {
            let p_sub = lattice.get(p_id);
            for &s_elem in self.s.full_subgroup().members() {
                let conj = Morphism::conjugation(p_sub, s_elem);
                let image = self.subgroup_from_members(conj.image_members());
                for q_id in 0..lattice.len() {
                    let q_sub = lattice.get(q_id);
                    if q_sub.contains_subgroup(&image) && !get(p_id, q_id).contains(&conj) {
                        return Err(Error::Precondition(format!(
                            "abstract system misses inner morphism on pair ({p_id}, {q_id})"
                        )));
                    }
                }
            }
        }
        for (&(p_id, q_id), set) in homs.iter() {
            let p_sub = lattice.get(p_id);
            let q_sub = lattice.get(q_id);
            for m in set.iter() {
                if m.source_members() != p_sub.members() {
                    return Err(Error::Precondition("morphism source mismatch".into()));
                }
                if !m.is_injective() || !m.verify_homomorphism(&self.s) {
                    return Err(Error::Precondition("non-injective or non-homomorphic entry".into()));
                }
                let image = self.subgroup_from_members(m.image_members());
                if !q_sub.contains_subgroup(&image) {
                    return Err(Error::Precondition("morphism image leaves target".into()));
                }
                // Iso part and inverse.
                if image.order() == p_sub.order() {
                    let iso_id = lattice.id_of(&image);
                    if !get(p_id, iso_id).iter().any(|n| n.images() == m.images()) {
                        return Err(Error::Precondition("missing corestriction to image".into()));
                    }
                    if !get(iso_id, p_id).contains(&m.inverse()) {
                        return Err(Error::Precondition("missing inverse of isomorphism".into()));
                    }
                }
                // Restriction closure to every subgroup of the source.
                for r_id in 0..lattice.len() {
                    let r_sub = lattice.get(r_id);
                    if r_sub.order() < p_sub.order() && p_sub.contains_subgroup(r_sub) {
                        let restricted = m.restrict(r_sub.members_arc());
                        if !get(r_id, q_id).iter().any(|n| n.images() == restricted.images()) {
                            return Err(Error::Precondition("missing restriction".into()));
                        }
                    }
                }
            }
            // Composition closure.
            for r_id in 0..lattice.len() {
                for m in set.iter() {
                    for n in get(q_id, r_id).iter() {
                        let comp = m.then(n);
                        if !get(p_id, r_id).iter().any(|k| k.images() == comp.images()) {
                            return Err(Error::Precondition("missing composition".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Hom-set-by-hom-set equality of two systems on the same table.
    pub fn hom_equal(&self, other: &FusionSystem) -> Result<bool> {
        if self.s != other.s {
            return Err(Error::MismatchedUnderlying {
                context: "hom_equal".into(),
            });
        }
        let lattice = self.lattice();
        for p_id in 0..lattice.len() {
            for q_id in 0..lattice.len() {
                let a = self.hom_set(lattice.get(p_id), lattice.get(q_id));
                let b = other.hom_set(lattice.get(p_id), lattice.get(q_id));
                if *a != *b {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Hom-set equality across different tables, along an explicit element
    /// bijection `map`: self-table index -> other-table index.  The map must
    /// be a group isomorphism; that is re-verified here.
    pub fn hom_equal_via(&self, other: &FusionSystem, map: &[Elem]) -> Result<bool> {
        if map.len() != self.s.order() || other.s_table().order() != self.s.order() {
            return Err(Error::MismatchedUnderlying {
                context: "hom_equal_via: size mismatch".into(),
            });
        }
        for a in 0..self.s.order() as Elem {
            for b in 0..self.s.order() as Elem {
                if map[self.s.mul(a, b) as usize]
                    != other.s_table().mul(map[a as usize], map[b as usize])
                {
                    return Err(Error::MismatchedUnderlying {
                        context: "hom_equal_via: map is not an isomorphism".into(),
                    });
                }
            }
        }
        let lattice = self.lattice();
        for p_id in 0..lattice.len() {
            let p_sub = lattice.get(p_id);
            let p_other = other.subgroup_from_members(
                p_sub.members().iter().map(|&x| map[x as usize]).collect(),
            );
            for q_id in 0..lattice.len() {
                let q_sub = lattice.get(q_id);
                let q_other = other.subgroup_from_members(
                    q_sub.members().iter().map(|&x| map[x as usize]).collect(),
                );
                let mine = self.hom_set(p_sub, q_sub);
                let theirs = other.hom_set(&p_other, &q_other);
                if mine.len() != theirs.len() {
                    return Ok(false);
                }
                for m in mine.iter() {
                    // Translate m: for each member of p_other (sorted), find
                    // its preimage under `map`, apply m, push the image.
                    let mut images = Vec::with_capacity(p_sub.order());
                    for &y in p_other.members() {
                        let x = map.iter().position(|&v| v == y).unwrap() as Elem;
                        images.push(map[m.apply(x) as usize]);
                    }
                    if !theirs.iter().any(|t| t.images() == images) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// JSON attachment: object list plus hom-set tables, subgroups identified
    /// by sorted member lists.
    pub fn to_json(&self) -> serde_json::Value {
        let lattice = self.lattice();
        let objects: Vec<Vec<Elem>> = lattice.subs.iter().map(|s| s.members().to_vec()).collect();
        let mut hom_table = Vec::new();
        for p_id in 0..lattice.len() {
            for q_id in 0..lattice.len() {
                let set = self.hom_set(lattice.get(p_id), lattice.get(q_id));
                if set.is_empty() {
                    continue;
                }
                hom_table.push(json!({
                    "source": p_id,
                    "target": q_id,
                    "maps": set.iter().map(|m| m.images().to_vec()).collect::<Vec<_>>(),
                }));
            }
        }
        json!({
            "prime": self.p,
            "order_s": self.s.order(),
            "objects": objects,
            "homs": hom_table,
        })
    }
}

/// Reverse lookup for an embedded subgroup: G-index -> S-index.
pub(crate) struct ReverseEmbed {
    map: Vec<Elem>,
}

impl ReverseEmbed {
    pub(crate) fn new(g: &Arc<GroupTable>, embed: &Arc<Vec<Elem>>) -> ReverseEmbed {
        let mut map = vec![Elem::MAX; g.order()];
        for (s_idx, &g_idx) in embed.iter().enumerate() {
            map[g_idx as usize] = s_idx as Elem;
        }
        ReverseEmbed { map }
    }

    #[inline]
    pub(crate) fn to_s(&self, g_idx: Elem) -> Option<Elem> {
        let v = self.map[g_idx as usize];
        (v != Elem::MAX).then_some(v)
    }
}

fn realized_homs(
    g: &Arc<GroupTable>,
    embed: &Arc<Vec<Elem>>,
    _s: &Arc<GroupTable>,
    p_sub: &Subgroup,
    q_sub: &Subgroup,
) -> Vec<Morphism> {
    let rev = ReverseEmbed::new(g, embed);
    let p_g: Vec<Elem> = p_sub.members().iter().map(|&x| embed[x as usize]).collect();
    let images: BTreeSet<Vec<Elem>> = (0..g.order() as Elem)
        .into_par_iter()
        .filter_map(|k| {
            let mut tuple = Vec::with_capacity(p_g.len());
            for &x in &p_g {
                let y = rev.to_s(g.conj(x, k))?;
                if !q_sub.contains(y) {
                    return None;
                }
                tuple.push(y);
            }
            Some(tuple)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    images
        .into_iter()
        .map(|tuple| Morphism::new(p_sub.members_arc(), tuple))
        .collect()
}

fn realized_classes(
    g: &Arc<GroupTable>,
    embed: &Arc<Vec<Elem>>,
    s: &Arc<GroupTable>,
    lattice: &Lattice,
) -> Vec<Vec<SubId>> {
    let rev = ReverseEmbed::new(g, embed);
    let gens = g.generating_set();
    let mut class_of: Vec<Option<usize>> = vec![None; lattice.len()];
    let mut classes: Vec<Vec<SubId>> = Vec::new();
    for start in 0..lattice.len() {
        if class_of[start].is_some() {
            continue;
        }
        let ci = classes.len();
        // Orbit of the member set under G-conjugation; conjugates leaving S
        // are tracked as raw G-member sets so the walk stays complete.
        let start_g: Vec<Elem> = lattice.get(start).members().iter().map(|&x| embed[x as usize]).collect();
        let mut seen: BTreeSet<Vec<Elem>> = BTreeSet::new();
        seen.insert(start_g.clone());
        let mut frontier = vec![start_g];
        let mut in_s: Vec<SubId> = Vec::new();
        while let Some(cur) = frontier.pop() {
            if let Some(s_members) = cur
                .iter()
                .map(|&x| rev.to_s(x))
                .collect::<Option<Vec<Elem>>>()
            {
                let sub = Subgroup::from_members_unchecked(s, s_members);
                in_s.push(lattice.id_of(&sub));
            }
            for &k in &gens {
                let mut next: Vec<Elem> = cur.iter().map(|&x| g.conj(x, k)).collect();
                next.sort_unstable();
                if seen.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
        in_s.sort_unstable();
        in_s.dedup();
        for &id in &in_s {
            class_of[id] = Some(ci);
        }
        classes.push(in_s);
    }
    classes
}

fn abstract_classes(
    homs: &BTreeMap<(SubId, SubId), Arc<Vec<Morphism>>>,
    lattice: &Lattice,
) -> Vec<Vec<SubId>> {
    // Union-find over iso relations present in the tables.
    let n = lattice.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    for (&(p_id, _q_id), set) in homs.iter() {
        for m in set.iter() {
            let image = m.image_members();
            if image.len() == lattice.get(p_id).order() {
                let img_sub = Subgroup::from_members_unchecked(lattice.get(p_id).parent(), image);
                let img_id = lattice.id_of(&img_sub);
                let a = find(&mut parent, p_id);
                let b = find(&mut parent, img_id);
                parent[a] = b;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<SubId>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }
    let mut classes: Vec<Vec<SubId>> = groups.into_values().collect();
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

#[derive(Debug, Clone)]
pub struct SubgroupStatus {
    pub fully_normalized: bool,
    pub fully_centralized: bool,
    pub fully_automized: bool,
    pub receptive: bool,
    pub f_centric: bool,
    pub t_centric: Option<bool>,
}

#[derive(Debug, Clone)]
pub struct SaturationReport {
    pub saturated: bool,
    /// (class index, witness subgroup id) per verified class.
    pub witnesses: Vec<(usize, SubId)>,
    pub failing_class: Option<Vec<SubId>>,
}

/// Verified normality level of a subsystem pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NormalityLevel {
    None,
    Invariant,
    WeaklyNormal,
    Normal,
}

impl NormalityLevel {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormalityLevel::None => "none",
            NormalityLevel::Invariant => "invariant",
            NormalityLevel::WeaklyNormal => "weakly-normal",
            NormalityLevel::Normal => "normal",
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalityReport {
    pub level: NormalityLevel,
    /// Human-readable witness for the first failing condition, if any.
    pub witness: Option<String>,
}

/// A pair (F on S, E on T ≤ S).  The embedding `t_in_s` sends E's element
/// indices to F's; it is strictly increasing by construction.
pub struct NormalPair {
    pub f: Arc<FusionSystem>,
    pub e: Arc<FusionSystem>,
    pub t_in_s: Arc<Vec<Elem>>,
    /// Verified level; populated by `verify_level`.
    pub level: NormalityLevel,
}

impl NormalPair {
    pub fn new(f: Arc<FusionSystem>, e: Arc<FusionSystem>, t_in_s: Vec<Elem>) -> Result<NormalPair> {
        if t_in_s.len() != e.s_table().order() {
            return Err(Error::MismatchedUnderlying {
                context: "t_in_s length != |T|".into(),
            });
        }
        // The embedding must be a group homomorphism T -> S.
        for a in 0..e.s_table().order() as Elem {
            for b in 0..e.s_table().order() as Elem {
                let lhs = t_in_s[e.s_table().mul(a, b) as usize];
                let rhs = f
                    .s_table()
                    .mul(t_in_s[a as usize], t_in_s[b as usize]);
                if lhs != rhs {
                    return Err(Error::MismatchedUnderlying {
                        context: "t_in_s is not a homomorphism".into(),
                    });
                }
            }
        }
        Ok(NormalPair {
            f,
            e,
            t_in_s: Arc::new(t_in_s),
            level: NormalityLevel::None,
        })
    }

    /// T as a subgroup of F's S-table.
    pub fn t_sub(&self) -> Subgroup {
        self.f
            .subgroup_from_members(self.t_in_s.iter().copied().collect())
    }

    /// Translates an E-morphism into S-coordinates.
    pub fn morphism_to_s(&self, m: &Morphism) -> Morphism {
        let source: Vec<Elem> = m
            .source_members()
            .iter()
            .map(|&x| self.t_in_s[x as usize])
            .collect();
        let images: Vec<Elem> = m.images().iter().map(|&x| self.t_in_s[x as usize]).collect();
        Morphism::new(Arc::new(source), images)
    }

    /// Translates a subgroup of E's table into a subgroup of F's table.
    pub fn subgroup_to_s(&self, sub: &Subgroup) -> Subgroup {
        self.f.subgroup_from_members(
            sub.members()
                .iter()
                .map(|&x| self.t_in_s[x as usize])
                .collect(),
        )
    }

    /// Pulls a subgroup of S contained in T back to E's coordinates.
    pub fn subgroup_to_t(&self, sub: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = sub
            .members()
            .iter()
            .map(|&x| {
                self.t_in_s
                    .binary_search(&x)
                    .expect("subgroup not contained in T") as Elem
            })
            .collect();
        self.e.subgroup_from_members(members)
    }

    /// All E-morphisms in S-coordinates, grouped by (source, target) pair of
    /// E-lattice ids.
    pub fn e_morphisms_in_s(&self) -> Vec<(Subgroup, Subgroup, Vec<Morphism>)> {
        let lattice = self.e.lattice();
        let mut out = Vec::new();
        for p_id in 0..lattice.len() {
            for q_id in 0..lattice.len() {
                let set = self.e.hom_set(lattice.get(p_id), lattice.get(q_id));
                if set.is_empty() {
                    continue;
                }
                let p_s = self.subgroup_to_s(lattice.get(p_id));
                let q_s = self.subgroup_to_s(lattice.get(q_id));
                out.push((
                    p_s,
                    q_s,
                    set.iter().map(|m| self.morphism_to_s(m)).collect(),
                ));
            }
        }
        out
    }

    /// Computes the invariance / weak-normality / normality level with a
    /// witness for the first failing condition.
    pub fn verify_level(&mut self) -> NormalityReport {
        let report = self.compute_level();
        self.level = report.level;
        report
    }

    fn compute_level(&self) -> NormalityReport {
        let t_sub = self.t_sub();
        if !self.f.is_strongly_closed(&t_sub) {
            return NormalityReport {
                level: NormalityLevel::None,
                witness: Some("T is not strongly F-closed".into()),
            };
        }
        if let Some(w) = self.strong_invariance_witness() {
            return NormalityReport {
                level: NormalityLevel::None,
                witness: Some(w),
            };
        }
        if !self.e.is_saturated().saturated {
            return NormalityReport {
                level: NormalityLevel::Invariant,
                witness: Some("E is not saturated".into()),
            };
        }
        if let Some(w) = self.extension_condition_witness() {
            return NormalityReport {
                level: NormalityLevel::WeaklyNormal,
                witness: Some(w),
            };
        }
        NormalityReport {
            level: NormalityLevel::Normal,
            witness: None,
        }
    }

    /// Strong invariance: for all P ≤ Q ≤ T, φ ∈ Hom_E(P,Q) and
    /// ψ ∈ Hom_F(Q,T), the ψ-twist of φ lies in E.  Returns the first
    /// failing tuple.
    fn strong_invariance_witness(&self) -> Option<String> {
        let e_lattice = self.e.lattice();
        let t_sub = self.t_sub();
        for q_id in 0..e_lattice.len() {
            let q_e = e_lattice.get(q_id).clone();
            let q_s = self.subgroup_to_s(&q_e);
            let psis = self.f.hom_set(&q_s, &t_sub);
            for p_id in 0..e_lattice.len() {
                let p_e = e_lattice.get(p_id).clone();
                if !q_e.contains_subgroup(&p_e) {
                    continue;
                }
                let phis = self.e.hom_set(&p_e, &q_e);
                if phis.is_empty() {
                    continue;
                }
                let p_s = self.subgroup_to_s(&p_e);
                for psi in psis.iter() {
                    // ψ restricted to P and to Q, with inverses on images.
                    let psi_p = psi.restrict(p_s.members_arc());
                    for phi in phis.iter() {
                        let phi_s = self.morphism_to_s(phi);
                        // twist: Pψ -> Qψ, x ↦ ((x)ψ|P⁻¹ φ) ψ.
                        let psi_p_inv = psi_p.inverse();
                        let source = Arc::new(psi_p_inv.source_members().to_vec());
                        let images: Vec<Elem> = source
                            .iter()
                            .map(|&x| psi.apply(phi_s.apply(psi_p_inv.apply(x))))
                            .collect();
                        let twisted = Morphism::new(Arc::clone(&source), images);
                        // Membership in E, in E-coordinates.
                        let src_t = self.subgroup_to_t(&self.f.subgroup_from_members(source.to_vec()));
                        let img_sub = self
                            .f
                            .subgroup_from_members(twisted.image_members());
                        let dst_t = self.subgroup_to_t(&img_sub);
                        let twisted_e = Morphism::new(
                            src_t.members_arc(),
                            twisted
                                .images()
                                .iter()
                                .map(|&x| {
                                    self.t_in_s.binary_search(&x).expect("twist leaves T") as Elem
                                })
                                .collect(),
                        );
                        let target_full = self.e.subgroup_from_members(
                            dst_t.members().to_vec(),
                        );
                        let in_e = self
                            .e
                            .hom_set(&src_t, &target_full)
                            .iter()
                            .any(|m| m.images() == twisted_e.images());
                        if !in_e {
                            return Some(format!(
                                "twist of φ: {:?} by ψ: {:?} leaves E",
                                phi_s.images(),
                                psi.images()
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    /// Extension condition for normality: each α ∈ Aut_E(T) extends to
    /// ᾱ ∈ Aut_F(T·C_S(T)) with [C_S(T), ᾱ] ≤ Z(T).
    fn extension_condition_witness(&self) -> Option<String> {
        let t_sub = self.t_sub();
        let full = self.f.full();
        let s = self.f.s_table();
        let c_s_t = Subgroup::centralizer_in(&full, &t_sub);
        let z_t = Subgroup::centralizer_in(&t_sub, &t_sub);
        let tc = t_sub.product(&c_s_t);
        let auts_tc = self.f.aut_f(&tc);
        let t_full_e = self.e.full();
        for alpha in self.e.aut_f(&t_full_e).iter() {
            let alpha_s = self.morphism_to_s(alpha);
            let found = auts_tc.iter().any(|bar| {
                // ᾱ|_T = α and [c, ᾱ] ∈ Z(T) for all c ∈ C_S(T).
                t_sub
                    .members()
                    .iter()
                    .all(|&x| bar.apply(x) == alpha_s.apply(x))
                    && c_s_t
                        .members()
                        .iter()
                        .all(|&c| z_t.contains(s.mul(s.inv(c), bar.apply(c))))
            });
            if !found {
                return Some(format!(
                    "α ∈ Aut_E(T) with images {:?} admits no extension to Aut_F(TC_S(T)) centralizing C_S(T) mod Z(T)",
                    alpha_s.images()
                ));
            }
        }
        None
    }
}
