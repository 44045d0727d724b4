//! Random regular graphs, random lifts, noise operators and detection
//! experiments.

mod detect;
mod lift;
mod noise;
mod regular;

pub use detect::{
    detect_experiment, roc_curve, roc_point, spectral_radius_statistic, DetectionResult, RocPoint,
    Sampler, Statistic,
};
pub use lift::{random_lift, random_lift_capped, random_multilift, LiftedGraph, LIFT_RETRY_CAP};
pub use noise::{
    apply_noise, apply_noise_with, Adversary, IdentityAdversary, NoiseMode, NoiseOutcome, NoiseSpec,
    RandomSwitching, DEFAULT_NOISE_RETRY_CAP,
};
pub use regular::{
    sample_bipartite_regular, sample_bipartite_regular_with, sample_regular, sample_regular_with,
    RegularMethod, DEFAULT_RETRY_CAP, PAIRING_MAX_DEGREE,
};
