//! Path Statistics, Symmetric Path Statistics and degree-(2, D) Local
//! Statistics feasibility: constraint evaluation, constructive witnesses,
//! Chebyshev infeasibility certificates and partially labelled graph
//! statistics.

mod certificate;
mod kernel;
mod lost2;
mod path_stats;
mod plg;
mod symmetric;
mod witness;

pub use certificate::{
    chebyshev_certificate, infeasibility_certificate, CertificateDiagnostic, InfeasibilityCertificate, DEFAULT_S_CAP,
};
pub use kernel::{build_kernels, km_jacobi, KernelBump, KernelKind, KernelOptions, KernelSet, KERNEL_DEGREE_CAP};
pub use lost2::{
    lost2_build_constraints, lost2_check, lost2_lower_witness, lost2_reduce, planted_pseudomoment, Lost2Constraints,
    PseudoMoment, MAX_LOST2_DIM,
};
pub use path_stats::{
    moment_values, path_stats_check, planted_witness, ConstraintResidual, FeasibilityReport, PathStatsInstance,
    PseudoPartition, EXACT_TOL, PSD_REL_TOL,
};
pub use plg::{count_occurrences, m_weight, n_edgeless, PartiallyLabelledGraph, MAX_PLG_EDGES, MAX_PLG_VERTICES};
pub use symmetric::{symmetric_instance, symmetric_path_stats, symmetric_targets, SymmetricDecision, SymmetricReport};
pub use witness::{bipartite_signed_gram, null_witness, NullWitnessOptions, WitnessLog};
