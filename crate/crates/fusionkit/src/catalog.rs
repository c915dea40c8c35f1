//! Deterministic constructors for the example groups and pairs used by the
//! test suites and experiments, plus the group-file parser.
//!
//! Spec grammar:
//!   sym:n | alt:n | cyclic:n | dihedral:n (order n) | klein:4 |
//!   quaternion:8 | product:(spec,spec,...) | example:weakly-normal |
//!   pair:(G-spec, H-spec, p)
//!
//! Product factors act on disjoint point blocks.  A pair spec interprets the
//! H-spec on the same points as G (padded with fixed points), verifies
//! H ⊴ G and that T = S ∩ H is Sylow in H.

use std::sync::Arc;

use serde::Deserialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fusion::{
    centralizer_subgroup_direct, intersect_fusion_systems, restrict_to_subgroup,
    subsystem_in_centralizer, FusionSystem, NormalPair, NormalityLevel,
};
use crate::group::{p_part, sylow_subgroup, Elem, GroupTable, Subgroup};
use crate::perm::Perm;

/// A realized normal group pair (G, H ⊴ G) with a chosen prime.
pub struct GroupPair {
    pub name: String,
    pub g: Arc<GroupTable>,
    pub h: Subgroup,
    pub p: usize,
}

/// Parses and builds a group spec as a permutation group.
pub fn build_group(spec: &str, caps: &Caps) -> Result<Arc<GroupTable>> {
    let perms = generators_for(spec)?;
    GroupTable::from_permutations(&perms, caps.max_group_order)
}

fn bad(spec: &str, why: &str) -> Error {
    Error::BadSpec(spec.to_string(), why.to_string())
}

fn generators_for(spec: &str) -> Result<Vec<Perm>> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("product:") {
        let inner = rest
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(|| bad(spec, "product needs (a,b,...)"))?;
        let parts = split_top_level(inner);
        if parts.is_empty() {
            return Err(bad(spec, "empty product"));
        }
        let factors: Vec<Vec<Perm>> = parts
            .iter()
            .map(|p| generators_for(p))
            .collect::<Result<_>>()?;
        let degrees: Vec<usize> = factors
            .iter()
            .map(|f| f.first().map_or(1, Perm::degree))
            .collect();
        let total: usize = degrees.iter().sum();
        let mut out = Vec::new();
        let mut offset = 0;
        for (f, d) in factors.iter().zip(&degrees) {
            for p in f {
                out.push(p.shift(offset, total));
            }
            offset += d;
        }
        return Ok(out);
    }
    let (kind, arg) = spec
        .split_once(':')
        .ok_or_else(|| bad(spec, "expected kind:arg"))?;
    let n: usize = arg
        .parse()
        .map_err(|_| bad(spec, "argument must be an integer"))?;
    match kind {
        "sym" => {
            if n < 1 {
                return Err(bad(spec, "sym:n needs n >= 1"));
            }
            if n == 1 {
                return Ok(vec![Perm::identity(1)]);
            }
            Ok(vec![
                Perm::from_cycles(n, &[(0..n).collect::<Vec<_>>()]).unwrap(),
                Perm::from_cycles(n, &[vec![0, 1]]).unwrap(),
            ])
        }
        "alt" => {
            if n < 3 {
                return Ok(vec![Perm::identity(n.max(1))]);
            }
            Ok((0..n - 2)
                .map(|i| Perm::from_cycles(n, &[vec![i, i + 1, i + 2]]).unwrap())
                .collect())
        }
        "cyclic" => {
            if n < 1 {
                return Err(bad(spec, "cyclic:n needs n >= 1"));
            }
            if n == 1 {
                return Ok(vec![Perm::identity(1)]);
            }
            Ok(vec![Perm::from_cycles(n, &[(0..n).collect::<Vec<_>>()]).unwrap()])
        }
        "dihedral" => {
            if n < 4 || n % 2 != 0 {
                return Err(bad(spec, "dihedral:n is the dihedral group of order n (n even >= 4)"));
            }
            let m = n / 2;
            let rotation = Perm::from_cycles(m, &[(0..m).collect::<Vec<_>>()]).unwrap();
            let reflection_images: Vec<u8> = (0..m).map(|i| ((m - i) % m) as u8).collect();
            let reflection = Perm::from_images(reflection_images).unwrap();
            Ok(vec![rotation, reflection])
        }
        "klein" => {
            if n != 4 {
                return Err(bad(spec, "klein:4 is the only supported form"));
            }
            Ok(vec![
                Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]]).unwrap(),
                Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]]).unwrap(),
            ])
        }
        "quaternion" => {
            if n != 8 {
                return Err(bad(spec, "quaternion:8 is the only supported form"));
            }
            // Regular representation on {1,-1,i,-i,j,-j,k,-k}.
            Ok(vec![
                Perm::from_cycles(8, &[vec![0, 2, 1, 3], vec![4, 6, 5, 7]]).unwrap(),
                Perm::from_cycles(8, &[vec![0, 4, 1, 5], vec![2, 7, 3, 6]]).unwrap(),
            ])
        }
        _ => Err(bad(spec, "unknown group kind")),
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c);
            }
            ')' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

/// Builds a `pair:(G-spec, H-spec, p)` descriptor.
pub fn build_pair(spec: &str, caps: &Caps) -> Result<GroupPair> {
    let spec = spec.trim();
    let inner = spec
        .strip_prefix("pair:")
        .and_then(|s| s.strip_prefix('('))
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad(spec, "expected pair:(G,H,p)"))?;
    let parts = split_top_level(inner);
    if parts.len() != 3 {
        return Err(bad(spec, "pair needs exactly G, H and p"));
    }
    let p: usize = parts[2]
        .parse()
        .map_err(|_| bad(spec, "prime must be an integer"))?;
    if !crate::group::is_prime(p) {
        return Err(bad(spec, "p must be prime"));
    }
    let g = build_group(&parts[0], caps)?;
    let degree = g.perm(0).map_or(1, Perm::degree);
    let h_gens: Vec<Perm> = generators_for(&parts[1])?
        .into_iter()
        .map(|perm| {
            if perm.degree() > degree {
                Err(bad(spec, "H acts on more points than G"))
            } else {
                Ok(perm.pad(degree))
            }
        })
        .collect::<Result<_>>()?;
    let h_elems: Vec<Elem> = {
        let h_table = GroupTable::from_permutations(&h_gens, caps.max_group_order)?;
        h_table
            .perms()
            .unwrap()
            .iter()
            .map(|perm| {
                g.element_of_perm(perm)
                    .ok_or_else(|| bad(spec, "H is not contained in G"))
            })
            .collect::<Result<_>>()?
    };
    let h = Subgroup::from_members_unchecked(&g, h_elems);
    verify_pair(&g, &h, p, spec)?;
    Ok(GroupPair {
        name: spec.to_string(),
        g,
        h,
        p,
    })
}

fn verify_pair(g: &Arc<GroupTable>, h: &Subgroup, p: usize, spec: &str) -> Result<()> {
    let full = g.full_subgroup();
    if !h.is_normal_in(&full) {
        return Err(bad(spec, "H is not normal in G"));
    }
    let s = sylow_subgroup(g, p);
    let t = s.intersect(h);
    if t.order() != p_part(h.order(), p) {
        return Err(bad(spec, "S ∩ H is not Sylow in H"));
    }
    Ok(())
}

/// Builds the realized normal pair of fusion systems for a group pair, with
/// the verified level populated.
pub fn realized_normal_pair(gp: &GroupPair, caps: &Caps) -> Result<NormalPair> {
    let s = sylow_subgroup(&gp.g, gp.p);
    let t = s.intersect(&gp.h);
    let f = Arc::new(FusionSystem::realized(&gp.g, &s, gp.p, *caps)?);
    let (h_table, h_members) = gp.h.as_group()?;
    let t_in_h = Subgroup::from_members_unchecked(
        &h_table,
        t.members()
            .iter()
            .map(|&x| h_members.binary_search(&x).expect("T inside H") as Elem)
            .collect(),
    );
    let e = Arc::new(FusionSystem::realized(&h_table, &t_in_h, gp.p, *caps)?);
    // E's table index -> F's table index, via G indices.
    let e_embed = Arc::clone(e.ambient_group().expect("realized").1);
    let s_members = s.members();
    let t_in_s: Vec<Elem> = e_embed
        .iter()
        .map(|&h_idx| {
            let g_idx = h_members[h_idx as usize];
            s_members.binary_search(&g_idx).expect("T inside S") as Elem
        })
        .collect();
    let mut pair = NormalPair::new(f, e, t_in_s)?;
    pair.verify_level();
    Ok(pair)
}

/// The weakly-normal example: H = H_1 × H_2 × H_3 with H_i ≅ A_4 on point
/// blocks {0..3}, {4..7}, {8..11}; x_i = (0 1 2), (4 5 6), (8 9 10);
/// X = ⟨x_1x_2, x_1x_3⟩ ≅ C_3 × C_3 and G = SX of order 576.
pub struct WeaklyNormalExample {
    pub g: Arc<GroupTable>,
    /// F = F_S(G) on S = S_1 S_2 S_3 of order 64.
    pub f: Arc<FusionSystem>,
    /// E = F_1 ∩ F_2 on S_1 (abstract).
    pub e: Arc<FusionSystem>,
    /// The pair (F, E) with verified level.
    pub pair: NormalPair,
    /// S_i as subgroups of F's S-table.
    pub s1: Subgroup,
    pub s2: Subgroup,
    pub s3: Subgroup,
    /// F_{S_1}(H_1) on the same S_1 table as `e`.
    pub f_s1_h1: FusionSystem,
}

fn v4_gens(offset: usize, degree: usize) -> Vec<Perm> {
    vec![
        Perm::from_cycles(4, &[vec![0, 1], vec![2, 3]])
            .unwrap()
            .shift(offset, degree),
        Perm::from_cycles(4, &[vec![0, 2], vec![1, 3]])
            .unwrap()
            .shift(offset, degree),
    ]
}

pub fn build_weakly_normal_example(caps: &Caps) -> Result<WeaklyNormalExample> {
    let degree = 12;
    let x1 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap().shift(0, degree);
    let x2 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap().shift(4, degree);
    let x3 = Perm::from_cycles(3, &[vec![0, 1, 2]]).unwrap().shift(8, degree);
    let mut s_gens = Vec::new();
    s_gens.extend(v4_gens(0, degree));
    s_gens.extend(v4_gens(4, degree));
    s_gens.extend(v4_gens(8, degree));

    let mut g_gens = s_gens.clone();
    g_gens.push(x1.compose(&x2));
    g_gens.push(x1.compose(&x3));
    let g = GroupTable::from_permutations(&g_gens, caps.max_group_order)?;

    let s_table = GroupTable::from_permutations(&s_gens, caps.max_group_order)?;
    let s_members: Vec<Elem> = s_table
        .perms()
        .unwrap()
        .iter()
        .map(|perm| g.element_of_perm(perm).expect("S inside G"))
        .collect();
    let s = Subgroup::from_members_unchecked(&g, s_members);
    let f = Arc::new(FusionSystem::realized(&g, &s, 2, *caps)?);

    let g_to_s = |g_idx: Elem| -> Elem {
        f.ambient_group()
            .unwrap()
            .1
            .binary_search(&g_idx)
            .expect("inside S") as Elem
    };
    let s_i_in_f = |offset: usize| -> Subgroup {
        let members: Vec<Elem> = v4_members(&g, offset, degree)
            .into_iter()
            .map(g_to_s)
            .collect();
        f.subgroup_from_members(members)
    };
    let s1 = s_i_in_f(0);
    let s2 = s_i_in_f(4);
    let s3 = s_i_in_f(8);

    // F_i on S_1 S_j realized from ⟨S_1, S_j, x_1 x_j⟩ (j = 2, 3).
    let build_fi = |other_offset: usize, x_other: &Perm| -> Result<FusionSystem> {
        let mut gens = v4_gens(0, degree);
        gens.extend(v4_gens(other_offset, degree));
        gens.push(x1.compose(x_other));
        let gi = GroupTable::from_permutations(&gens, caps.max_group_order)?;
        let si = sylow_subgroup(&gi, 2);
        FusionSystem::realized(&gi, &si, 2, *caps)
    };
    let f1 = build_fi(4, &x2)?;
    let f2 = build_fi(8, &x3)?;

    // Restrict both to S_1 (the same canonical table) and intersect.
    let s1_in = |fi: &FusionSystem| -> Subgroup {
        let (gi, embed) = fi.ambient_group().expect("realized");
        let members: Vec<Elem> = v4_members(gi, 0, degree)
            .into_iter()
            .map(|g_idx| embed.binary_search(&g_idx).expect("S_1 inside Sylow") as Elem)
            .collect();
        fi.subgroup_from_members(members)
    };
    let r1 = restrict_to_subgroup(&f1, &s1_in(&f1), true)?;
    let r2 = restrict_to_subgroup(&f2, &s1_in(&f2), true)?;
    let e = Arc::new(intersect_fusion_systems(&r1, &r2)?);

    // F_{S_1}(H_1) with H_1 = ⟨S_1, x_1⟩ ≅ A_4.
    let mut h1_gens = v4_gens(0, degree);
    h1_gens.push(x1.clone());
    let h1 = GroupTable::from_permutations(&h1_gens, caps.max_group_order)?;
    let s1_in_h1 = sylow_subgroup(&h1, 2);
    let f_s1_h1 = FusionSystem::realized(&h1, &s1_in_h1, 2, *caps)?;

    // Pair (F, E): embed E's S_1-table into F's S-table.
    let t_in_s: Vec<Elem> = e
        .s_table()
        .perms()
        .expect("S_1 table is permutation-realized")
        .iter()
        .map(|perm| g_to_s(g.element_of_perm(perm).expect("S_1 inside G")))
        .collect();
    let mut pair = NormalPair::new(Arc::clone(&f), Arc::clone(&e), t_in_s)?;
    pair.verify_level();

    Ok(WeaklyNormalExample {
        g,
        f,
        e,
        pair,
        s1,
        s2,
        s3,
        f_s1_h1,
    })
}

fn v4_members(g: &Arc<GroupTable>, offset: usize, degree: usize) -> Vec<Elem> {
    let gens = v4_gens(offset, degree);
    let table = GroupTable::from_permutations(&gens, 64).unwrap();
    table
        .perms()
        .unwrap()
        .iter()
        .map(|perm| g.element_of_perm(perm).expect("V4 inside parent"))
        .collect()
}

/// Group-file ingestion: {"degree": n, "generators": [[[cycle]...]]} or
/// {"table": [[...]]}.
#[derive(Deserialize)]
struct GroupFile {
    #[serde(default)]
    degree: Option<usize>,
    #[serde(default)]
    generators: Option<Vec<Vec<Vec<usize>>>>,
    #[serde(default)]
    table: Option<Vec<Vec<usize>>>,
}

pub fn group_from_json(text: &str, caps: &Caps) -> Result<Arc<GroupTable>> {
    let file: GroupFile = serde_json::from_str(text)?;
    match (file.degree, file.generators, file.table) {
        (Some(degree), Some(gens), None) => {
            let perms: Vec<Perm> = gens
                .iter()
                .map(|cycles| {
                    Perm::from_cycles(degree, cycles)
                        .ok_or_else(|| Error::BadSpec("group file".into(), "bad cycle".into()))
                })
                .collect::<Result<_>>()?;
            GroupTable::from_permutations(&perms, caps.max_group_order)
        }
        (None, None, Some(rows)) => {
            if rows.len() > caps.max_group_order {
                return Err(Error::CapExceeded {
                    what: "group order",
                    limit: caps.max_group_order,
                    actual: rows.len(),
                });
            }
            GroupTable::from_table(rows)
        }
        _ => Err(Error::BadSpec(
            "group file".into(),
            "need either degree+generators or table".into(),
        )),
    }
}

/// Default catalog of realized systems for the hyperfocal / Z* / saturation
/// suites, as (spec, p).
pub fn default_group_catalog() -> Vec<(&'static str, usize)> {
    vec![
        ("sym:4", 2),
        ("alt:4", 2),
        ("dihedral:8", 2),
        ("quaternion:8", 2),
        ("sym:6", 2),
        ("alt:6", 2),
        ("product:(alt:4,cyclic:2)", 2),
        ("cyclic:12", 2),
        ("sym:3", 3),
        ("product:(sym:3,cyclic:3)", 3),
        ("product:(sym:3,sym:3)", 3),
        ("example:weakly-normal", 2),
    ]
}

/// Default catalog of realized normal pairs, as pair specs.
pub fn default_pair_catalog() -> Vec<&'static str> {
    vec![
        "pair:(sym:4, alt:4, 2)",
        "pair:(product:(alt:4,cyclic:2), alt:4, 2)",
        "pair:(sym:6, alt:6, 2)",
        "pair:(dihedral:8, cyclic:4, 2)",
        "pair:(sym:4, klein:4, 2)",
        "pair:(alt:4, klein:4, 2)",
        "pair:(product:(sym:3,cyclic:3), sym:3, 3)",
        "pair:(product:(sym:3,sym:3), product:(cyclic:3,cyclic:3), 3)",
        "pair:(sym:4, sym:4, 2)",
    ]
}

/// Groups for the Gross suite: p-constrained with trivial p'-core and order
/// within the automorphism cap.
pub fn default_gross_catalog() -> Vec<(&'static str, usize)> {
    vec![
        ("sym:4", 2),
        ("sym:3", 3),
        ("dihedral:8", 2),
        ("quaternion:8", 2),
        ("alt:4", 2),
        ("product:(alt:4,cyclic:2)", 2),
        ("product:(sym:3,cyclic:3)", 3),
        ("product:(sym:3,sym:3)", 3),
    ]
}

/// Builds a realized fusion system straight from a spec.
pub fn realized_system_for(spec: &str, p: usize, caps: &Caps) -> Result<Arc<FusionSystem>> {
    if spec == "example:weakly-normal" {
        let ex = build_weakly_normal_example(caps)?;
        return Ok(ex.f);
    }
    let g = build_group(spec, caps)?;
    let s = sylow_subgroup(&g, p);
    Ok(Arc::new(FusionSystem::realized(&g, &s, p, *caps)?))
}

/// Verdicts of the weakly-normal example regression, in the order checked.
#[derive(Debug)]
pub struct WeaklyNormalReport {
    pub e_equals_f_s1_h1: bool,
    pub e_saturated: bool,
    pub e_invariant: bool,
    pub e_normal: bool,
    pub normality_witness: Option<String>,
    pub e_in_cf_s2: bool,
    pub e_in_cf_s3: bool,
    pub e_in_cf_s2s3: bool,
    /// The raw set {g ∈ S : E ⊆ C_F(⟨g⟩)} and its closure flag.
    pub direct_set: Vec<Elem>,
    pub direct_set_is_subgroup: bool,
    /// Member sets of S_2 and S_3 inside S, for comparison with `direct_set`.
    pub s2_members: Vec<Elem>,
    pub s3_members: Vec<Elem>,
}

/// Runs the full example regression.
pub fn regression_example_weakly_normal(caps: &Caps) -> Result<WeaklyNormalReport> {
    let ex = build_weakly_normal_example(caps)?;
    let e_equals = ex.e.hom_equal(&ex.f_s1_h1)?;
    let sat = ex.e.is_saturated();
    let level = ex.pair.level;
    let witness = {
        let mut pair = NormalPair::new(
            Arc::clone(&ex.pair.f),
            Arc::clone(&ex.pair.e),
            ex.pair.t_in_s.to_vec(),
        )?;
        pair.verify_level().witness
    };
    let e_in_cf_s2 = subsystem_in_centralizer(&ex.pair, &ex.s2);
    let e_in_cf_s3 = subsystem_in_centralizer(&ex.pair, &ex.s3);
    let s2s3 = ex.s2.product(&ex.s3);
    let e_in_cf_s2s3 = subsystem_in_centralizer(&ex.pair, &s2s3);
    let direct = centralizer_subgroup_direct(&ex.pair);
    Ok(WeaklyNormalReport {
        e_equals_f_s1_h1: e_equals,
        e_saturated: sat.saturated,
        e_invariant: level >= NormalityLevel::Invariant,
        e_normal: level >= NormalityLevel::Normal,
        normality_witness: witness,
        e_in_cf_s2,
        e_in_cf_s3,
        e_in_cf_s2s3,
        direct_set: direct.members,
        direct_set_is_subgroup: direct.is_subgroup,
        s2_members: ex.s2.members().to_vec(),
        s3_members: ex.s3.members().to_vec(),
    })
}
