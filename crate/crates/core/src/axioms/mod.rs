//! Projection axioms for families of axis translates, the quasi-tree built
//! from them, and contracting elements inside normal subgroups.

mod constructor;
mod family;
mod quasitree;

pub use constructor::{find_contracting_in_subgroup, ContractingElement};
pub use family::{
    audit_axioms, projection_table, AxiomAudit, AxisFamily, FamilyMember, P0Violation, P1Violation, ProjEntry,
    ProjectionTable,
};
pub use quasitree::{
    bottleneck_measure, build_quasitree, sample_pairs, BottleneckReport, BottleneckSample, KEdgeBundle, QuasiTree,
};
