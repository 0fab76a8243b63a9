//! The weight spectral sequence of a strictly semistable degeneration:
//! E1 assembly from stratum data, E2 over Z and F_ℓ, and the monodromy maps
//! on E2.

pub mod corpus;
mod descriptor;
mod page;
mod verdict;

pub use descriptor::{BoundaryKind, BoundaryMap, DegenerationDescriptor, Stratum, StratumCohomology, StratumIndex};
pub use page::{
    assemble_d1, assemble_e1, compute_e2, compute_e2_mod, e2_entry, E1Entry, E2Entry, E2ModEntry, E2Table,
    SpectralPage, Summand, BASIS_CONVENTION, SIGN_CONVENTION,
};
pub use verdict::{
    monodromy_on_e2, monodromy_verdict, total_rank_consistency, weight_report, D2Vanishing, DegreeCheck,
    LevelVerdict, MonodromyVerdict, RankConsistency, WeightReport,
};
