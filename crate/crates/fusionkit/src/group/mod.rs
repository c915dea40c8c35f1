//! Finite-group engine: multiplication tables, subgroups, morphisms.
//!
//! A [`GroupTable`] is a finite group given by a total multiplication table
//! over canonical element indices.  Tables built from permutations enumerate
//! elements in lexicographic order of image tuples, so the identity is always
//! element 0 and all derived sets are deterministic.

mod lattice;
mod ops;

pub use lattice::subgroups_of_p_group;
pub use ops::{
    automorphism_group, is_prime, isomorphisms_between, p_part, quotient_group,
    residual_subgroup, structure_predicates, sylow_subgroup, AutomorphismGroup, Quotient,
    ResidualKind, StructurePredicates,
};

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::perm::Perm;

/// Canonical element index inside a [`GroupTable`].
pub type Elem = u16;

#[derive(Clone)]
pub struct GroupTable {
    order: usize,
    mult: Vec<Elem>,
    inverse: Vec<Elem>,
    perm_realization: Option<Vec<Perm>>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GroupTable").field("order", &self.order).finish()
    }
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.mult == other.mult
    }
}
impl Eq for GroupTable {}

impl GroupTable {
    /// Closes a generating set of permutations and returns the group with
    /// elements sorted lexicographically by image tuple.
    pub fn from_permutations(generators: &[Perm], max_order: usize) -> Result<Arc<GroupTable>> {
        let degree = generators.first().map_or(1, Perm::degree);
        if generators.iter().any(|g| g.degree() != degree) {
            return Err(Error::InvalidTable("generators of mixed degree".into()));
        }
        let mut elems: Vec<Perm> = vec![Perm::identity(degree)];
        let mut seen: HashMap<Perm, usize> = HashMap::new();
        seen.insert(elems[0].clone(), 0);
        let mut frontier = vec![0usize];
        while let Some(i) = frontier.pop() {
            for g in generators {
                let prod = elems[i].compose(g);
                if !seen.contains_key(&prod) {
                    if elems.len() >= max_order {
                        return Err(Error::CapExceeded {
                            what: "group order",
                            limit: max_order,
                            actual: elems.len() + 1,
                        });
                    }
                    seen.insert(prod.clone(), elems.len());
                    frontier.push(elems.len());
                    elems.push(prod);
                }
            }
        }
        elems.sort();
        Self::from_sorted_permutations(elems)
    }

    /// Builds the table for an explicit, already-closed element list.  The
    /// list is sorted internally; it must contain the identity and be closed
    /// under composition and inverse.
    pub fn from_element_permutations(elements: Vec<Perm>, max_order: usize) -> Result<Arc<GroupTable>> {
        if elements.len() > max_order {
            return Err(Error::CapExceeded {
                what: "group order",
                limit: max_order,
                actual: elements.len(),
            });
        }
        let mut elems = elements;
        elems.sort();
        elems.dedup();
        Self::from_sorted_permutations(elems)
    }

    fn from_sorted_permutations(elems: Vec<Perm>) -> Result<Arc<GroupTable>> {
        let order = elems.len();
        let index: HashMap<&Perm, Elem> = elems.iter().zip(0..).map(|(p, i)| (p, i as Elem)).collect();
        if order == 0 || !elems[0].is_identity() {
            return Err(Error::InvalidTable("identity missing or not index 0".into()));
        }
        let mut mult = vec![0 as Elem; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod = elems[a].compose(&elems[b]);
                let &idx = index
                    .get(&prod)
                    .ok_or_else(|| Error::InvalidTable("element set not closed under composition".into()))?;
                mult[a * order + b] = idx;
            }
        }
        let mut inverse = vec![0 as Elem; order];
        for a in 0..order {
            let inv = elems[a].inverse();
            let &idx = index
                .get(&inv)
                .ok_or_else(|| Error::InvalidTable("element set not closed under inverse".into()))?;
            inverse[a] = idx;
        }
        Ok(Arc::new(GroupTable {
            order,
            mult,
            inverse,
            perm_realization: Some(elems),
        }))
    }

    /// Builds a table from raw multiplication data (row-major, `table[a][b] = a·b`).
    /// Runs the full axiom scan: identity, inverses, associativity.
    pub fn from_table(rows: Vec<Vec<usize>>) -> Result<Arc<GroupTable>> {
        let order = rows.len();
        if order == 0 || order > Elem::MAX as usize {
            return Err(Error::InvalidTable("empty or oversized table".into()));
        }
        let mut mult = vec![0 as Elem; order * order];
        for (a, row) in rows.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidTable("table is not square".into()));
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::InvalidTable("entry out of range".into()));
                }
                mult[a * order + b] = v as Elem;
            }
        }
        // Identity must be element 0.
        for a in 0..order {
            if mult[a] as usize != a || mult[a * order] as usize != a {
                return Err(Error::InvalidTable("element 0 is not an identity".into()));
            }
        }
        let mut inverse = vec![Elem::MAX; order];
        for a in 0..order {
            for b in 0..order {
                if mult[a * order + b] == 0 {
                    if mult[b * order + a] != 0 {
                        return Err(Error::InvalidTable(format!("one-sided inverse at {a}")));
                    }
                    inverse[a] = b as Elem;
                }
            }
            if inverse[a] == Elem::MAX {
                return Err(Error::InvalidTable(format!("element {a} has no inverse")));
            }
        }
        let table = GroupTable {
            order,
            mult,
            inverse,
            perm_realization: None,
        };
        table.check_associativity()?;
        Ok(Arc::new(table))
    }

    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n as Elem {
            for b in 0..n as Elem {
                let ab = self.mul(a, b);
                for c in 0..n as Elem {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvalidTable(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Full invariant scan: identity/inverse laws, associativity, and (when
    /// present) faithfulness of the permutation realization.
    pub fn validate(&self) -> Result<()> {
        self.check_associativity()?;
        for a in 0..self.order as Elem {
            if self.mul(a, self.inv(a)) != 0 || self.mul(self.inv(a), a) != 0 {
                return Err(Error::InvalidTable(format!("inverse law fails at {a}")));
            }
        }
        if let Some(perms) = &self.perm_realization {
            for a in 0..self.order as Elem {
                for b in 0..self.order as Elem {
                    let lhs = perms[a as usize].compose(&perms[b as usize]);
                    if lhs != perms[self.mul(a, b) as usize] {
                        return Err(Error::InvalidTable(format!(
                            "permutation realization is not a homomorphism at ({a}, {b})"
                        )));
                    }
                }
            }
            let mut sorted: Vec<&Perm> = perms.iter().collect();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != self.order {
                return Err(Error::InvalidTable("permutation realization is not faithful".into()));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mult[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    /// `g⁻¹ x g` (right conjugation action).
    #[inline]
    pub fn conj(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `x⁻¹ · x^g`, the commutator `[x, g]`.
    #[inline]
    pub fn commutator(&self, x: Elem, g: Elem) -> Elem {
        self.mul(self.inv(x), self.conj(x, g))
    }

    pub fn identity(&self) -> Elem {
        0
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != 0 {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn perm(&self, a: Elem) -> Option<&Perm> {
        self.perm_realization.as_ref().map(|ps| &ps[a as usize])
    }

    pub fn perms(&self) -> Option<&[Perm]> {
        self.perm_realization.as_deref()
    }

    /// Index of the element realized by `p`, if any.
    pub fn element_of_perm(&self, p: &Perm) -> Option<Elem> {
        let perms = self.perm_realization.as_ref()?;
        perms.binary_search(p).ok().map(|i| i as Elem)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as Elem)
            .all(|a| (0..self.order as Elem).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Greedy small generating sequence: repeatedly adjoin the smallest
    /// element outside the closure so far.
    pub fn generating_set(self: &Arc<Self>) -> Vec<Elem> {
        let mut gens: Vec<Elem> = Vec::new();
        let mut closed = Subgroup::generated(self, &[]);
        while closed.order() < self.order {
            let next = (0..self.order as Elem)
                .find(|&a| !closed.contains(a))
                .expect("closure smaller than group must miss an element");
            gens.push(next);
            closed = Subgroup::generated(self, &gens);
        }
        gens
    }

    /// The full group as a subgroup of itself.
    pub fn full_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_members_unchecked(self, (0..self.order as Elem).collect())
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_members_unchecked(self, vec![0])
    }

    pub fn center(self: &Arc<Self>) -> Subgroup {
        let members = (0..self.order as Elem)
            .filter(|&z| (0..self.order as Elem).all(|g| self.mul(z, g) == self.mul(g, z)))
            .collect();
        Subgroup::from_members_unchecked(self, members)
    }
}

/// A subgroup of a fixed [`GroupTable`], stored as a sorted member list.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<GroupTable>,
    members: Arc<Vec<Elem>>,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {}, members {:?})", self.order(), self.members)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members || *self.members == *other.members
    }
}
impl Eq for Subgroup {}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.order(), &*self.members).cmp(&(other.order(), &*other.members))
    }
}

impl std::hash::Hash for Subgroup {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.members.hash(state);
    }
}

impl Subgroup {
    /// Closure of a generator list; the empty list yields the trivial subgroup.
    pub fn generated(parent: &Arc<GroupTable>, generators: &[Elem]) -> Subgroup {
        let mut in_set = vec![false; parent.order()];
        in_set[0] = true;
        let mut members: Vec<Elem> = vec![0];
        let mut frontier: Vec<Elem> = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in generators {
                let prod = parent.mul(x, g);
                if !in_set[prod as usize] {
                    in_set[prod as usize] = true;
                    members.push(prod);
                    frontier.push(prod);
                }
            }
        }
        // The closure of {x·g} from the identity walks right-multiplication
        // orbits, which is the generated subgroup whenever the generator set
        // is inverse-closed-in-effect; finite order makes x⁻¹ = x^(n-1), so
        // right multiplication alone suffices.
        members.sort_unstable();
        Subgroup {
            parent: Arc::clone(parent),
            members: Arc::new(members),
        }
    }

    /// Wraps an already-sorted member list believed to be a subgroup.
    pub fn from_members_unchecked(parent: &Arc<GroupTable>, mut members: Vec<Elem>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup {
            parent: Arc::clone(parent),
            members: Arc::new(members),
        }
    }

    /// Checks closure under multiplication and inverse, and identity membership.
    pub fn verify_closed(&self) -> Result<()> {
        if !self.contains(0) {
            return Err(Error::InvalidTable("subgroup misses the identity".into()));
        }
        for &a in self.members.iter() {
            if !self.contains(self.parent.inv(a)) {
                return Err(Error::InvalidTable(format!("subgroup not inverse-closed at {a}")));
            }
            for &b in self.members.iter() {
                if !self.contains(self.parent.mul(a, b)) {
                    return Err(Error::InvalidTable(format!(
                        "subgroup not closed under product at ({a}, {b})"
                    )));
                }
            }
        }
        if self.parent.order() % self.order() != 0 {
            return Err(Error::InvalidTable("Lagrange violation".into()));
        }
        Ok(())
    }

    pub fn parent(&self) -> &Arc<GroupTable> {
        &self.parent
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn members_arc(&self) -> Arc<Vec<Elem>> {
        Arc::clone(&self.members)
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn contains_subgroup(&self, other: &Subgroup) -> bool {
        other.members.iter().all(|&x| self.contains(x))
    }

    pub fn conjugate(&self, g: Elem) -> Subgroup {
        let members: Vec<Elem> = self.members.iter().map(|&x| self.parent.conj(x, g)).collect();
        Subgroup::from_members_unchecked(&self.parent, members)
    }

    pub fn is_normal_in(&self, ambient: &Subgroup) -> bool {
        ambient
            .members
            .iter()
            .all(|&g| self.members.iter().all(|&x| self.contains(self.parent.conj(x, g))))
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = self.members.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup {
            parent: Arc::clone(&self.parent),
            members: Arc::new(members),
        }
    }

    /// Product set A·B; the caller is responsible for it being a subgroup
    /// (e.g. when one factor normalizes or centralizes the other).
    pub fn product(&self, other: &Subgroup) -> Subgroup {
        let mut members = Vec::new();
        for &a in self.members.iter() {
            for &b in other.members.iter() {
                members.push(self.parent.mul(a, b));
            }
        }
        Subgroup::from_members_unchecked(&self.parent, members)
    }

    /// Generates the join ⟨A ∪ B⟩.
    pub fn join(&self, other: &Subgroup) -> Subgroup {
        let gens: Vec<Elem> = self
            .members
            .iter()
            .chain(other.members.iter())
            .copied()
            .collect();
        Subgroup::generated(&self.parent, &gens)
    }

    /// Elements of `ambient` centralizing every member of `target`.
    pub fn centralizer_in(ambient: &Subgroup, target: &Subgroup) -> Subgroup {
        let parent = &ambient.parent;
        let members: Vec<Elem> = ambient
            .members
            .iter()
            .copied()
            .filter(|&a| target.members.iter().all(|&t| parent.mul(a, t) == parent.mul(t, a)))
            .collect();
        Subgroup {
            parent: Arc::clone(parent),
            members: Arc::new(members),
        }
    }

    /// Elements of `ambient` normalizing `target` setwise.
    pub fn normalizer_in(ambient: &Subgroup, target: &Subgroup) -> Subgroup {
        let parent = &ambient.parent;
        let members: Vec<Elem> = ambient
            .members
            .iter()
            .copied()
            .filter(|&a| target.members.iter().all(|&t| target.contains(parent.conj(t, a))))
            .collect();
        Subgroup {
            parent: Arc::clone(parent),
            members: Arc::new(members),
        }
    }

    /// Normal closure ⟨ members^ambient ⟩ inside `ambient`.
    pub fn normal_closure_in(&self, ambient: &Subgroup) -> Subgroup {
        let mut gens: Vec<Elem> = Vec::new();
        for &x in self.members.iter() {
            for &g in ambient.members.iter() {
                gens.push(self.parent.conj(x, g));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        Subgroup::generated(&self.parent, &gens)
    }

    /// Re-tables this subgroup as a group in its own right.  Returns the new
    /// table together with the member list mapping new index -> parent index.
    /// When the parent carries permutations the new table inherits them, so
    /// canonical element order is again lex order on image tuples.
    pub fn as_group(&self) -> Result<(Arc<GroupTable>, Vec<Elem>)> {
        let n = self.members.len();
        if let Some(perms) = self.parent.perms() {
            let elems: Vec<Perm> = self.members.iter().map(|&m| perms[m as usize].clone()).collect();
            // members are sorted by index, and indices are sorted by perm.
            let table = GroupTable::from_sorted_permutations(elems)?;
            return Ok((table, self.members.to_vec()));
        }
        let mut pos = HashMap::new();
        for (i, &m) in self.members.iter().enumerate() {
            pos.insert(m, i);
        }
        let mut mult = vec![0 as Elem; n * n];
        for a in 0..n {
            for b in 0..n {
                let prod = self.parent.mul(self.members[a], self.members[b]);
                mult[a * n + b] = *pos
                    .get(&prod)
                    .ok_or_else(|| Error::InvalidTable("member set not closed".into()))? as Elem;
            }
        }
        let mut inverse = vec![0 as Elem; n];
        for a in 0..n {
            inverse[a] = pos[&self.parent.inv(self.members[a])] as Elem;
        }
        Ok((
            Arc::new(GroupTable {
                order: n,
                mult,
                inverse,
                perm_realization: None,
            }),
            self.members.to_vec(),
        ))
    }
}

/// Kind selector for [`local_subgroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalKind {
    Centralizer,
    Normalizer,
}

/// `C_ambient(target)` or `N_ambient(target)`.
pub fn local_subgroup(ambient: &Subgroup, target: &Subgroup, kind: LocalKind) -> Subgroup {
    match kind {
        LocalKind::Centralizer => Subgroup::centralizer_in(ambient, target),
        LocalKind::Normalizer => Subgroup::normalizer_in(ambient, target),
    }
}

/// A homomorphism between subgroups of (possibly different) tables, stored as
/// the total image map on the sorted source members.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupMorphism {
    source_members: Arc<Vec<Elem>>,
    images: Vec<Elem>,
}

impl std::fmt::Debug for GroupMorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupMorphism({:?} -> {:?})", self.source_members, self.images)
    }
}

impl GroupMorphism {
    pub fn new(source_members: Arc<Vec<Elem>>, images: Vec<Elem>) -> GroupMorphism {
        debug_assert_eq!(source_members.len(), images.len());
        GroupMorphism { source_members, images }
    }

    /// The conjugation map `x ↦ x^g` restricted to `source`.
    pub fn conjugation(source: &Subgroup, g: Elem) -> GroupMorphism {
        let table = source.parent();
        GroupMorphism {
            source_members: source.members_arc(),
            images: source.members().iter().map(|&x| table.conj(x, g)).collect(),
        }
    }

    pub fn identity(source: &Subgroup) -> GroupMorphism {
        GroupMorphism {
            source_members: source.members_arc(),
            images: source.members().to_vec(),
        }
    }

    pub fn source_members(&self) -> &[Elem] {
        &self.source_members
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    pub fn apply(&self, x: Elem) -> Elem {
        let i = self
            .source_members
            .binary_search(&x)
            .expect("element outside morphism source");
        self.images[i]
    }

    pub fn maps(&self, x: Elem) -> Option<Elem> {
        self.source_members.binary_search(&x).ok().map(|i| self.images[i])
    }

    pub fn image_members(&self) -> Vec<Elem> {
        let mut v = self.images.clone();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn is_identity_map(&self) -> bool {
        *self.source_members == self.images
    }

    pub fn is_injective(&self) -> bool {
        self.image_members().len() == self.images.len()
    }

    /// Checks the homomorphism law against the table both sides live in.
    pub fn verify_homomorphism(&self, table: &GroupTable) -> bool {
        let n = self.source_members.len();
        for a in 0..n {
            for b in 0..n {
                let prod = table.mul(self.source_members[a], self.source_members[b]);
                let expected = match self.maps(prod) {
                    Some(e) => e,
                    None => return false,
                };
                if table.mul(self.images[a], self.images[b]) != expected {
                    return false;
                }
            }
        }
        true
    }

    /// Restriction to a sub-source (members must lie inside the source).
    pub fn restrict(&self, sub_members: Arc<Vec<Elem>>) -> GroupMorphism {
        let images = sub_members.iter().map(|&x| self.apply(x)).collect();
        GroupMorphism {
            source_members: sub_members,
            images,
        }
    }

    /// `self` then `other` (left-to-right composition).
    pub fn then(&self, other: &GroupMorphism) -> GroupMorphism {
        GroupMorphism {
            source_members: Arc::clone(&self.source_members),
            images: self.images.iter().map(|&x| other.apply(x)).collect(),
        }
    }

    /// Inverse of a bijective morphism, defined on its image.
    pub fn inverse(&self) -> GroupMorphism {
        let mut pairs: Vec<(Elem, Elem)> = self
            .images
            .iter()
            .copied()
            .zip(self.source_members.iter().copied())
            .collect();
        pairs.sort_unstable();
        GroupMorphism {
            source_members: Arc::new(pairs.iter().map(|&(i, _)| i).collect()),
            images: pairs.iter().map(|&(_, s)| s).collect(),
        }
    }
}
