//! Resource caps.  Every cap fails loudly instead of silently truncating.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group order a `GroupTable` may have.
    pub max_group_order: usize,
    /// Largest order of a p-group S whose subgroups are enumerated exhaustively.
    pub max_subgroup_lattice: usize,
    /// Largest group order handed to automorphism enumeration.
    pub max_automorphism_order: usize,
    /// Hard limit on the number of automorphisms enumerated.
    pub max_automorphism_count: usize,
    /// Object-count limit for isotypical-autoequivalence enumeration.
    pub max_functor_objects: usize,
    /// Candidate limit for isotypical-autoequivalence enumeration.
    pub max_functor_candidates: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_group_order: 10_000,
            max_subgroup_lattice: 1 << 8,
            max_automorphism_order: 256,
            max_automorphism_count: 100_000,
            max_functor_objects: 12,
            max_functor_candidates: 10_000,
        }
    }
}
