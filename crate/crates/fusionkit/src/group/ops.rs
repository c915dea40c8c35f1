//! Standard local and residual subgroups, quotients, automorphism groups and
//! structural predicates.

use std::collections::HashMap;
use std::sync::Arc;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::group::{Elem, GroupMorphism, GroupTable, Subgroup};

/// Exact p-part of `n`.
pub fn p_part(mut n: usize, p: usize) -> usize {
    let mut part = 1;
    while n % p == 0 {
        part *= p;
        n /= p;
    }
    part
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// A Sylow p-subgroup found by normalizer climbing: a p-subgroup `P` smaller
/// than the full p-part has `N_G(P) > P`, so some p-element of the normalizer
/// extends it.  Ties are broken by smallest element index, making the output
/// deterministic for a fixed table.
pub fn sylow_subgroup(parent: &Arc<GroupTable>, p: usize) -> Subgroup {
    debug_assert!(is_prime(p));
    let target = p_part(parent.order(), p);
    let mut current = parent.trivial_subgroup();
    if target == 1 {
        return current;
    }
    // Seed with the first p-element.
    let seed = (1..parent.order() as Elem)
        .map(|a| {
            let ord = parent.element_order(a);
            (a, ord)
        })
        .find(|&(_, ord)| ord % p == 0)
        .map(|(a, ord)| {
            let mut x = a;
            let mut k = ord;
            while k % p == 0 {
                k /= p;
            }
            // x^k has order the p-part of ord.
            for _ in 1..k {
                x = parent.mul(x, a);
            }
            x
        })
        .expect("p divides |G| so a p-element exists");
    current = Subgroup::generated(parent, &[seed]);
    while current.order() < target {
        let full = parent.full_subgroup();
        let normalizer = Subgroup::normalizer_in(&full, &current);
        let next = normalizer
            .members()
            .iter()
            .copied()
            .filter(|&x| !current.contains(x) && p_part(parent.element_order(x), p) == parent.element_order(x))
            .map(|x| {
                let mut gens: Vec<Elem> = current.members().to_vec();
                gens.push(x);
                Subgroup::generated(parent, &gens)
            })
            .find(|cand| cand.order() > current.order() && cand.order() == p_part(cand.order(), p))
            .expect("a proper p-subgroup has a strictly larger p-overgroup in its normalizer");
        current = next;
    }
    current
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualKind {
    /// Largest normal p-subgroup O_p(G).
    OpLower,
    /// Largest normal p'-subgroup O_{p'}(G).
    OpPrimeLower,
    /// Smallest normal subgroup with p-group quotient, O^p(G).
    OpUpper,
    /// Smallest normal subgroup with p'-group quotient, O^{p'}(G).
    OpPrimeUpper,
}

/// The four standard residual subgroups.
///
/// * `O^p(G)` is the closure of all p'-elements and `O^{p'}(G)` of all
///   p-elements: each is normal and minimal with the required quotient.
/// * `O_p(G)` is the normal core of any Sylow p-subgroup.
/// * `O_{p'}(G)` is generated by the p'-elements whose normal closure is a
///   p'-group.
pub fn residual_subgroup(parent: &Arc<GroupTable>, p: usize, kind: ResidualKind) -> Subgroup {
    debug_assert!(is_prime(p));
    match kind {
        ResidualKind::OpUpper => {
            let gens: Vec<Elem> = (0..parent.order() as Elem)
                .filter(|&a| parent.element_order(a) % p != 0)
                .collect();
            Subgroup::generated(parent, &gens)
        }
        ResidualKind::OpPrimeUpper => {
            let gens: Vec<Elem> = (0..parent.order() as Elem)
                .filter(|&a| {
                    let ord = parent.element_order(a);
                    ord == p_part(ord, p)
                })
                .collect();
            Subgroup::generated(parent, &gens)
        }
        ResidualKind::OpLower => {
            let sylow = sylow_subgroup(parent, p);
            let full = parent.full_subgroup();
            let mut core = sylow;
            for &g in full.members() {
                if core.is_trivial() {
                    break;
                }
                core = core.intersect(&core.conjugate(g));
            }
            core
        }
        ResidualKind::OpPrimeLower => {
            let full = parent.full_subgroup();
            let mut members: Vec<Elem> = vec![0];
            let mut done: Vec<bool> = vec![false; parent.order()];
            loop {
                let current = Subgroup::generated(parent, &members);
                let mut grew = false;
                for a in 0..parent.order() as Elem {
                    if done[a as usize] || current.contains(a) {
                        continue;
                    }
                    if parent.element_order(a) % p == 0 {
                        done[a as usize] = true;
                        continue;
                    }
                    let closure = Subgroup::from_members_unchecked(parent, vec![a]).normal_closure_in(&full);
                    if closure.order() % p != 0 {
                        members = current.join(&closure).members().to_vec();
                        grew = true;
                        break;
                    }
                    done[a as usize] = true;
                }
                if !grew {
                    return current;
                }
            }
        }
    }
}

/// A quotient G/N with its projection map.
pub struct Quotient {
    pub table: Arc<GroupTable>,
    /// parent element index -> coset index.
    pub projection: Vec<Elem>,
    /// coset index -> canonical (smallest) parent representative.
    pub reps: Vec<Elem>,
}

impl Quotient {
    pub fn project_subgroup(&self, sub: &Subgroup) -> Subgroup {
        let members: Vec<Elem> = sub.members().iter().map(|&x| self.projection[x as usize]).collect();
        Subgroup::from_members_unchecked(&self.table, members)
    }

    pub fn projection_morphism(&self, parent: &Arc<GroupTable>) -> GroupMorphism {
        GroupMorphism::new(
            Arc::new((0..parent.order() as Elem).collect()),
            self.projection.clone(),
        )
    }
}

/// Coset table of `parent / normal`; rejects non-normal input.
pub fn quotient_group(parent: &Arc<GroupTable>, normal: &Subgroup) -> Result<Quotient> {
    let full = parent.full_subgroup();
    if !normal.is_normal_in(&full) {
        return Err(Error::NotNormal {
            context: format!("quotient by subgroup of order {}", normal.order()),
        });
    }
    let n = parent.order();
    let mut coset_of: Vec<Option<Elem>> = vec![None; n];
    let mut reps: Vec<Elem> = Vec::new();
    for x in 0..n as Elem {
        if coset_of[x as usize].is_some() {
            continue;
        }
        let id = reps.len() as Elem;
        reps.push(x);
        for &m in normal.members() {
            coset_of[parent.mul(m, x) as usize] = Some(id);
        }
    }
    let projection: Vec<Elem> = coset_of.into_iter().map(|c| c.expect("cosets cover G")).collect();
    let k = reps.len();
    let mut mult = vec![0 as Elem; k * k];
    for a in 0..k {
        for b in 0..k {
            mult[a * k + b] = projection[parent.mul(reps[a], reps[b]) as usize];
        }
    }
    let mut inverse = vec![0 as Elem; k];
    for a in 0..k {
        inverse[a] = projection[parent.inv(reps[a]) as usize];
    }
    let table = Arc::new(GroupTable {
        order: k,
        mult,
        inverse,
        perm_realization: None,
    });
    // Coset multiplication is well-defined exactly because `normal` is
    // normal; re-scan to guard against a bad membership list.
    for a in 0..n as Elem {
        for &m in normal.members() {
            if projection[parent.mul(a, m) as usize] != projection[a as usize] {
                return Err(Error::NotNormal {
                    context: "coset table inconsistent".into(),
                });
            }
        }
    }
    Ok(Quotient { table, projection, reps })
}

/// The automorphism group of `parent`, as a group acting on its elements.
pub struct AutomorphismGroup {
    /// One total image map per automorphism; index i = element i of `table`.
    pub maps: Vec<Vec<Elem>>,
    /// Composition table of the maps (left-to-right composition).
    pub table: Arc<GroupTable>,
}

impl AutomorphismGroup {
    pub fn order(&self) -> usize {
        self.maps.len()
    }
}

/// All automorphisms by generator-image backtracking.  After each generator
/// image is chosen, the partial map is closed over the subgroup generated so
/// far and checked to be an injective homomorphism, which prunes dead
/// branches early.
pub fn automorphism_group(parent: &Arc<GroupTable>, caps: &Caps) -> Result<AutomorphismGroup> {
    if parent.order() > caps.max_automorphism_order {
        return Err(Error::CapExceeded {
            what: "automorphism-group order",
            limit: caps.max_automorphism_order,
            actual: parent.order(),
        });
    }
    let gens = parent.generating_set();
    let n = parent.order();
    if gens.is_empty() {
        return Ok(AutomorphismGroup {
            maps: vec![vec![0]],
            table: GroupTable::from_table(vec![vec![0]])?,
        });
    }
    // Per-level BFS data: elements of ⟨gens[..k]⟩ in discovery order with
    // (predecessor, generator) words drawing only on the first k generators.
    let mut level_elems: Vec<Vec<Elem>> = Vec::new();
    let mut word_parent: Vec<(Elem, usize)> = vec![(0, usize::MAX); n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut discovered: Vec<Elem> = vec![0];
    for k in 1..=gens.len() {
        let mut head = 0;
        while head < discovered.len() {
            let x = discovered[head];
            head += 1;
            for (gi, &g) in gens.iter().enumerate().take(k) {
                let y = parent.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    word_parent[y as usize] = (x, gi);
                    discovered.push(y);
                }
            }
        }
        level_elems.push(discovered.clone());
    }
    let orders: Vec<usize> = (0..n as Elem).map(|a| parent.element_order(a)).collect();
    let mut maps: Vec<Vec<Elem>> = Vec::new();
    let mut chosen: Vec<Elem> = Vec::new();
    backtrack_automorphisms(
        parent,
        &gens,
        &orders,
        &word_parent,
        &level_elems,
        &mut chosen,
        &mut maps,
        caps.max_automorphism_count,
    )?;
    maps.sort_unstable();
    let index: HashMap<&Vec<Elem>, Elem> = maps.iter().zip(0..).map(|(m, i)| (m, i as Elem)).collect();
    let k = maps.len();
    let mut mult = vec![0 as Elem; k * k];
    for a in 0..k {
        for b in 0..k {
            let composed: Vec<Elem> = maps[a].iter().map(|&x| maps[b][x as usize]).collect();
            mult[a * k + b] = *index
                .get(&composed)
                .ok_or_else(|| Error::InvalidTable("automorphism set not closed".into()))?;
        }
    }
    let mut inverse = vec![0 as Elem; k];
    for a in 0..k {
        let mut inv_map = vec![0 as Elem; n];
        for x in 0..n {
            inv_map[maps[a][x] as usize] = x as Elem;
        }
        inverse[a] = *index
            .get(&inv_map)
            .ok_or_else(|| Error::InvalidTable("automorphism set not inverse-closed".into()))?;
    }
    let table = Arc::new(GroupTable {
        order: k,
        mult,
        inverse,
        perm_realization: None,
    });
    Ok(AutomorphismGroup { maps, table })
}

#[allow(clippy::too_many_arguments)]
fn backtrack_automorphisms(
    parent: &Arc<GroupTable>,
    gens: &[Elem],
    orders: &[usize],
    word_parent: &[(Elem, usize)],
    level_elems: &[Vec<Elem>],
    chosen: &mut Vec<Elem>,
    out: &mut Vec<Vec<Elem>>,
    cap: usize,
) -> Result<()> {
    if chosen.len() == gens.len() {
        // The last level check already verified the map on all of G.
        let map = evaluate_partial_map(parent, word_parent, &level_elems[chosen.len() - 1], chosen)
            .expect("leaf reached only through a verified branch");
        if out.len() >= cap {
            return Err(Error::CapExceeded {
                what: "automorphism count",
                limit: cap,
                actual: out.len() + 1,
            });
        }
        out.push(map);
        return Ok(());
    }
    let g = gens[chosen.len()];
    for cand in 0..parent.order() as Elem {
        if orders[cand as usize] != orders[g as usize] {
            continue;
        }
        chosen.push(cand);
        if evaluate_partial_map(parent, word_parent, &level_elems[chosen.len() - 1], chosen).is_some() {
            backtrack_automorphisms(parent, gens, orders, word_parent, level_elems, chosen, out, cap)?;
        }
        chosen.pop();
    }
    Ok(())
}

/// Evaluates the chosen generator images on ⟨gens[..k]⟩ via BFS words and
/// checks the induced map is an injective homomorphism on that subgroup;
/// `None` when it is not.
fn evaluate_partial_map(
    parent: &Arc<GroupTable>,
    word_parent: &[(Elem, usize)],
    elems: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let n = parent.order();
    let mut map = vec![Elem::MAX; n];
    map[0] = 0;
    for &x in elems.iter().skip(1) {
        let (px, gi) = word_parent[x as usize];
        map[x as usize] = parent.mul(map[px as usize], images[gi]);
    }
    let mut seen = vec![false; n];
    for &x in elems {
        let im = map[x as usize];
        if seen[im as usize] {
            return None;
        }
        seen[im as usize] = true;
    }
    for &a in elems {
        for &b in elems {
            if map[parent.mul(a, b) as usize] != parent.mul(map[a as usize], map[b as usize]) {
                return None;
            }
        }
    }
    Some(map)
}

/// All isomorphisms from `a` to `b` as total image maps, by generator-image
/// backtracking with per-level closure pruning.  Empty when not isomorphic.
pub fn isomorphisms_between(a: &Arc<GroupTable>, b: &Arc<GroupTable>) -> Vec<Vec<Elem>> {
    if a.order() != b.order() {
        return Vec::new();
    }
    let n = a.order();
    if n == 1 {
        return vec![vec![0]];
    }
    let gens = a.generating_set();
    let mut level_elems: Vec<Vec<Elem>> = Vec::new();
    let mut word_parent: Vec<(Elem, usize)> = vec![(0, usize::MAX); n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut discovered: Vec<Elem> = vec![0];
    for k in 1..=gens.len() {
        let mut head = 0;
        while head < discovered.len() {
            let x = discovered[head];
            head += 1;
            for (gi, &g) in gens.iter().enumerate().take(k) {
                let y = a.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    word_parent[y as usize] = (x, gi);
                    discovered.push(y);
                }
            }
        }
        level_elems.push(discovered.clone());
    }
    let a_orders: Vec<usize> = (0..n as Elem).map(|x| a.element_order(x)).collect();
    let b_orders: Vec<usize> = (0..n as Elem).map(|x| b.element_order(x)).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<Elem> = Vec::new();
    iso_backtrack(
        a,
        b,
        &gens,
        &a_orders,
        &b_orders,
        &word_parent,
        &level_elems,
        &mut chosen,
        &mut out,
    );
    out.sort_unstable();
    out
}

#[allow(clippy::too_many_arguments)]
fn iso_backtrack(
    a: &Arc<GroupTable>,
    b: &Arc<GroupTable>,
    gens: &[Elem],
    a_orders: &[usize],
    b_orders: &[usize],
    word_parent: &[(Elem, usize)],
    level_elems: &[Vec<Elem>],
    chosen: &mut Vec<Elem>,
    out: &mut Vec<Vec<Elem>>,
) {
    if chosen.len() == gens.len() {
        if let Some(map) = evaluate_cross_map(a, b, word_parent, &level_elems[chosen.len() - 1], chosen) {
            out.push(map);
        }
        return;
    }
    let g = gens[chosen.len()];
    for cand in 0..b.order() as Elem {
        if b_orders[cand as usize] != a_orders[g as usize] {
            continue;
        }
        chosen.push(cand);
        if evaluate_cross_map(a, b, word_parent, &level_elems[chosen.len() - 1], chosen).is_some() {
            iso_backtrack(a, b, gens, a_orders, b_orders, word_parent, level_elems, chosen, out);
        }
        chosen.pop();
    }
}

fn evaluate_cross_map(
    a: &Arc<GroupTable>,
    b: &Arc<GroupTable>,
    word_parent: &[(Elem, usize)],
    elems: &[Elem],
    images: &[Elem],
) -> Option<Vec<Elem>> {
    let n = a.order();
    let mut map = vec![Elem::MAX; n];
    map[0] = 0;
    for &x in elems.iter().skip(1) {
        let (px, gi) = word_parent[x as usize];
        map[x as usize] = b.mul(map[px as usize], images[gi]);
    }
    let mut seen = vec![false; n];
    for &x in elems {
        let im = map[x as usize];
        if seen[im as usize] {
            return None;
        }
        seen[im as usize] = true;
    }
    for &x in elems {
        for &y in elems {
            if map[a.mul(x, y) as usize] != b.mul(map[x as usize], map[y as usize]) {
                return None;
            }
        }
    }
    Some(map)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructurePredicates {
    pub has_normal_p_complement: bool,
    /// Evaluated only when `O_{p'}(G) = 1` (the convention under which
    /// p-constraint is defined here); `None` otherwise.
    pub is_p_constrained: Option<bool>,
    pub o_p_prime_trivial: bool,
}

/// The three §-style structural predicates: normal p-complement
/// (`O^p(G) = O_{p'}(G)`), p-constraint (a normal G-centric p-subgroup exists,
/// equivalently `O_p(G)` is G-centric), and triviality of the p'-core.
pub fn structure_predicates(parent: &Arc<GroupTable>, p: usize) -> StructurePredicates {
    let op_upper = residual_subgroup(parent, p, ResidualKind::OpUpper);
    let op_prime_lower = residual_subgroup(parent, p, ResidualKind::OpPrimeLower);
    let o_p_prime_trivial = op_prime_lower.is_trivial();
    let is_p_constrained = if o_p_prime_trivial {
        let op = residual_subgroup(parent, p, ResidualKind::OpLower);
        let full = parent.full_subgroup();
        let c = Subgroup::centralizer_in(&full, &op);
        Some(op.contains_subgroup(&c))
    } else {
        None
    };
    StructurePredicates {
        has_normal_p_complement: op_upper == op_prime_lower,
        is_p_constrained,
        o_p_prime_trivial,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::LocalKind;
    use crate::perm::Perm;

    fn pgroup(degree: usize, gens: &[&[Vec<usize>]]) -> Arc<GroupTable> {
        let perms: Vec<Perm> = gens
            .iter()
            .map(|cycles| Perm::from_cycles(degree, cycles).unwrap())
            .collect();
        GroupTable::from_permutations(&perms, 10_000).unwrap()
    }

    fn sym4() -> Arc<GroupTable> {
        pgroup(4, &[&[vec![0, 1, 2, 3]], &[vec![0, 1]]])
    }

    fn alt4() -> Arc<GroupTable> {
        pgroup(4, &[&[vec![0, 1, 2]], &[vec![0, 1], vec![2, 3]]])
    }

    fn sym3() -> Arc<GroupTable> {
        pgroup(3, &[&[vec![0, 1, 2]], &[vec![0, 1]]])
    }

    fn elem_of(table: &Arc<GroupTable>, cycles: &[Vec<usize>]) -> Elem {
        let degree = table.perm(0).unwrap().degree();
        let p = Perm::from_cycles(degree, cycles).unwrap();
        table.element_of_perm(&p).unwrap()
    }

    /// Naive closure oracle: repeatedly append all pairwise products.
    fn naive_closure(table: &Arc<GroupTable>, gens: &[Elem]) -> Vec<Elem> {
        let mut set: Vec<Elem> = vec![0];
        set.extend_from_slice(gens);
        set.sort_unstable();
        set.dedup();
        loop {
            let mut grew = false;
            let snapshot = set.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    let p = table.mul(a, b);
                    if set.binary_search(&p).is_err() {
                        set.push(p);
                        set.sort_unstable();
                        grew = true;
                    }
                }
            }
            if !grew {
                return set;
            }
        }
    }

    #[test]
    fn generated_subgroup_matches_naive_closure() {
        let g = sym4();
        let four_cycle = elem_of(&g, &[vec![0, 1, 2, 3]]);
        let transposition = elem_of(&g, &[vec![0, 2]]);
        let sub = Subgroup::generated(&g, &[four_cycle, transposition]);
        assert_eq!(sub.order(), 8);
        assert_eq!(sub.members(), &naive_closure(&g, &[four_cycle, transposition])[..]);
        sub.verify_closed().unwrap();

        assert_eq!(Subgroup::generated(&g, &[]).order(), 1);

        let a4 = alt4();
        let d1 = elem_of(&a4, &[vec![0, 1], vec![2, 3]]);
        let d2 = elem_of(&a4, &[vec![0, 2], vec![1, 3]]);
        let klein = Subgroup::generated(&a4, &[d1, d2]);
        assert_eq!(klein.order(), 4);
        assert_eq!(klein.members(), &naive_closure(&a4, &[d1, d2])[..]);
    }

    #[test]
    fn local_subgroups_by_exhaustive_scan() {
        let s3 = sym3();
        let a3 = Subgroup::generated(&s3, &[elem_of(&s3, &[vec![0, 1, 2]])]);
        let full = s3.full_subgroup();
        let cent = local_subgroup_for_test(&full, &a3, LocalKind::Centralizer);
        assert_eq!(cent, a3);

        // Everything centralizes the trivial subgroup.
        let trivial = s3.trivial_subgroup();
        assert_eq!(local_subgroup_for_test(&full, &trivial, LocalKind::Centralizer), full);

        // In S_4: C_{D_8}(V_4) = V_4 for the double-transposition Klein group.
        let g = sym4();
        let d8 = Subgroup::generated(
            &g,
            &[elem_of(&g, &[vec![0, 1, 2, 3]]), elem_of(&g, &[vec![0, 2]])],
        );
        let v4 = Subgroup::generated(
            &g,
            &[
                elem_of(&g, &[vec![0, 1], vec![2, 3]]),
                elem_of(&g, &[vec![0, 2], vec![1, 3]]),
            ],
        );
        assert!(d8.contains_subgroup(&v4));
        let cent = local_subgroup_for_test(&d8, &v4, LocalKind::Centralizer);
        assert_eq!(cent, v4);

        // Normalizer of V_4 in S_4 is all of S_4.
        assert_eq!(local_subgroup_for_test(&full_subgroup(&g), &v4, LocalKind::Normalizer).order(), 24);
    }

    fn full_subgroup(g: &Arc<GroupTable>) -> Subgroup {
        g.full_subgroup()
    }

    fn local_subgroup_for_test(ambient: &Subgroup, target: &Subgroup, kind: LocalKind) -> Subgroup {
        crate::group::local_subgroup(ambient, target, kind)
    }

    #[test]
    fn sylow_orders() {
        assert_eq!(sylow_subgroup(&sym4(), 2).order(), 8);
        assert_eq!(sylow_subgroup(&sym4(), 3).order(), 3);
        let c5 = pgroup(5, &[&[vec![0, 1, 2, 3, 4]]]);
        assert_eq!(sylow_subgroup(&c5, 2).order(), 1);
        let a6 = pgroup(
            6,
            &[&[vec![0, 1, 2]], &[vec![1, 2, 3]], &[vec![2, 3, 4]], &[vec![3, 4, 5]]],
        );
        assert_eq!(a6.order(), 360);
        assert_eq!(sylow_subgroup(&a6, 2).order(), 8);
        assert_eq!(sylow_subgroup(&a6, 3).order(), 9);
        assert_eq!(sylow_subgroup(&a6, 5).order(), 5);
    }

    #[test]
    fn sylow_output_is_p_subgroup_and_deterministic() {
        let g = sym4();
        let s1 = sylow_subgroup(&g, 2);
        let s2 = sylow_subgroup(&g, 2);
        assert_eq!(s1, s2);
        s1.verify_closed().unwrap();
        for &x in s1.members() {
            assert_eq!(p_part(g.element_order(x), 2), g.element_order(x));
        }
    }

    #[test]
    fn residuals() {
        let g = sym4();
        // O^2(S_4) = A_4, identified by matching the independently built A_4.
        let o2 = residual_subgroup(&g, 2, ResidualKind::OpUpper);
        assert_eq!(o2.order(), 12);
        let a4_perms: Vec<Perm> = alt4().perms().unwrap().to_vec();
        let embedded: Vec<Elem> = a4_perms.iter().map(|p| g.element_of_perm(p).unwrap()).collect();
        assert_eq!(o2, Subgroup::from_members_unchecked(&g, embedded));

        let s3 = sym3();
        let o2p = residual_subgroup(&s3, 2, ResidualKind::OpPrimeLower);
        assert_eq!(o2p.order(), 3);

        // p not dividing |G|: O_p trivial.
        let c5 = pgroup(5, &[&[vec![0, 1, 2, 3, 4]]]);
        assert!(residual_subgroup(&c5, 2, ResidualKind::OpLower).is_trivial());

        // O_2(S_4) = V_4.
        let o2_lower = residual_subgroup(&g, 2, ResidualKind::OpLower);
        assert_eq!(o2_lower.order(), 4);
        // O_p(G) lies in the Sylow p-subgroup.
        assert!(sylow_subgroup(&g, 2).contains_subgroup(&o2_lower));

        // O^p duality: O^p(G) = G iff no nontrivial p-quotient.
        let a4 = alt4();
        assert_eq!(residual_subgroup(&a4, 2, ResidualKind::OpUpper).order(), 12);
        assert_eq!(residual_subgroup(&a4, 3, ResidualKind::OpUpper).order(), 4);
    }

    #[test]
    fn quotients() {
        let g = sym4();
        let v4 = residual_subgroup(&g, 2, ResidualKind::OpLower);
        let q = quotient_group(&g, &v4).unwrap();
        assert_eq!(q.table.order(), 6);
        assert!(!q.table.is_abelian()); // S_4/V_4 ≅ S_3

        // Projection is a homomorphism with kernel exactly V_4.
        for a in 0..g.order() as Elem {
            for b in 0..g.order() as Elem {
                assert_eq!(
                    q.projection[g.mul(a, b) as usize],
                    q.table.mul(q.projection[a as usize], q.projection[b as usize])
                );
            }
        }
        let kernel: Vec<Elem> = (0..g.order() as Elem).filter(|&x| q.projection[x as usize] == 0).collect();
        assert_eq!(&kernel[..], v4.members());

        // A_4 / V_4 = C_3.
        let a4 = alt4();
        let v4a = residual_subgroup(&a4, 2, ResidualKind::OpLower);
        let q2 = quotient_group(&a4, &v4a).unwrap();
        assert_eq!(q2.table.order(), 3);

        // G / trivial ≅ G.
        let q3 = quotient_group(&g, &g.trivial_subgroup()).unwrap();
        assert_eq!(q3.table.order(), 24);

        // Non-normal input is rejected.
        let c2 = Subgroup::generated(&g, &[elem_of(&g, &[vec![0, 1]])]);
        assert!(quotient_group(&g, &c2).is_err());
    }

    /// Brute-force oracle: every bijection of the element set that preserves
    /// the multiplication table.  Usable only for tiny groups.
    fn brute_force_automorphisms(g: &Arc<GroupTable>) -> Vec<Vec<Elem>> {
        let n = g.order();
        let mut out = Vec::new();
        let mut perm: Vec<Elem> = (0..n as Elem).collect();
        permute_scan(g, &mut perm, 1, &mut out);
        out.sort();
        out
    }

    fn permute_scan(g: &Arc<GroupTable>, perm: &mut Vec<Elem>, k: usize, out: &mut Vec<Vec<Elem>>) {
        let n = g.order();
        if k == n {
            let ok = (0..n as Elem)
                .all(|a| (0..n as Elem).all(|b| perm[g.mul(a, b) as usize] == g.mul(perm[a as usize], perm[b as usize])));
            if ok {
                out.push(perm.clone());
            }
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute_scan(g, perm, k + 1, out);
            perm.swap(k, i);
        }
    }

    #[test]
    fn automorphism_groups_match_brute_force() {
        let caps = Caps::default();
        // Klein four-group: Aut of order 6.
        let v4 = pgroup(4, &[&[vec![0, 1]], &[vec![2, 3]]]);
        let aut = automorphism_group(&v4, &caps).unwrap();
        assert_eq!(aut.order(), 6);
        assert_eq!(aut.maps, brute_force_automorphisms(&v4));

        // C_2: trivial automorphism group.
        let c2 = pgroup(2, &[&[vec![0, 1]]]);
        assert_eq!(automorphism_group(&c2, &caps).unwrap().order(), 1);

        // S_3: all six automorphisms are inner.
        let s3 = sym3();
        let aut3 = automorphism_group(&s3, &caps).unwrap();
        assert_eq!(aut3.order(), 6);
        assert_eq!(aut3.maps, brute_force_automorphisms(&s3));

        // Composition of two returned automorphisms is again in the set.
        for a in aut3.maps.iter().take(3) {
            for b in aut3.maps.iter().take(3) {
                let composed: Vec<Elem> = a.iter().map(|&x| b[x as usize]).collect();
                assert!(aut3.maps.binary_search(&composed).is_ok());
            }
        }
    }

    #[test]
    fn automorphism_group_of_sym4_is_inner() {
        let aut = automorphism_group(&sym4(), &Caps::default()).unwrap();
        assert_eq!(aut.order(), 24);
    }

    #[test]
    fn structure_predicate_examples() {
        // S_3 at p = 2 has a normal 2-complement (O^2 = O_{2'} = C_3).
        let s3 = sym3();
        let pred = structure_predicates(&s3, 2);
        assert!(pred.has_normal_p_complement);
        assert!(!pred.o_p_prime_trivial);
        assert_eq!(pred.is_p_constrained, None);

        // S_4 at p = 2 is 2-constrained: O_2 = V_4 is S_4-centric.
        let pred4 = structure_predicates(&sym4(), 2);
        assert!(pred4.o_p_prime_trivial);
        assert_eq!(pred4.is_p_constrained, Some(true));
        assert!(!pred4.has_normal_p_complement);

        // A p-group: all three hold with O_p = P.
        let d8 = pgroup(4, &[&[vec![0, 1, 2, 3]], &[vec![1, 3]]]);
        let pred8 = structure_predicates(&d8, 2);
        assert!(pred8.has_normal_p_complement);
        assert_eq!(pred8.is_p_constrained, Some(true));
        assert!(pred8.o_p_prime_trivial);
    }

    #[test]
    fn normalizer_order_consistency() {
        // |N_G(P)| ≥ |P·C_G(P)| / |Z(P)| by direct recount.
        let g = sym4();
        let full = g.full_subgroup();
        for gens in [
            vec![elem_of(&g, &[vec![0, 1]])],
            vec![elem_of(&g, &[vec![0, 1, 2, 3]])],
            vec![elem_of(&g, &[vec![0, 1], vec![2, 3]]), elem_of(&g, &[vec![0, 2], vec![1, 3]])],
        ] {
            let p = Subgroup::generated(&g, &gens);
            let n = Subgroup::normalizer_in(&full, &p);
            let c = Subgroup::centralizer_in(&full, &p);
            let z = Subgroup::centralizer_in(&p, &p);
            let pc = p.product(&c);
            assert_eq!(pc.order(), p.order() * c.order() / z.order());
            assert!(n.order() >= pc.order());
            assert!(n.contains_subgroup(&pc));
        }
    }
}
