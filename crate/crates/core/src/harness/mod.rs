//! Built-in graphs, reproduction suites and experiment orchestration.

mod experiment;
mod figures;
mod registry;
mod table1;

pub use experiment::{
    default_threshold, run, Artifact, Artifacts, ExperimentConfig, ExperimentKind, DETECT_MARGIN, MAX_SWEEP_LEVEL,
};
pub use figures::{repro_figures, FigureCheck, FigureReport, FiguresReport};
pub use registry::{
    builtin, canonical_block, complete_d, figure_names, figure_source, hkd, necklace, parse_matrix_text,
    MAX_COMPLETE_DEGREE,
};
pub use table1::{lift_order, repro_table1, LiftedWitness, Table1Report, EXPANSION_EPSILON, TABLE1_ROWS};
