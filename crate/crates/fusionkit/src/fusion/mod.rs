//! Fusion systems on finite p-groups.

mod centralizer;
mod subsystems;
mod system;

pub use centralizer::{center_of_fusion_system, centralizer_subgroup_direct, CentralizerSet};
pub use subsystems::{
    centralizer_system, hyperfocal, hyperfocal_realized_oracle, intersect_fusion_systems,
    k_normalizer_system, morphisms_as_group, p_power_index_subsystem, restrict_to_subgroup,
    subsystem_contains, subsystem_in_centralizer, CentralizerSystem,
};
pub use system::{
    FusionSystem, Lattice, Morphism, NormalPair, NormalityLevel, NormalityReport,
    SaturationReport, SubId, SubgroupStatus,
};
