//! Shared inputs for the benchmarks in `benches/`.

use quietlift_core::ensembles::{random_lift, sample_regular};
use quietlift_core::harness::builtin;
use quietlift_core::{LiftedGraph, SimpleGraph};

pub const BENCH_SEED: u64 = 0xbe4c;

pub fn null_graph(n: usize, d: usize) -> SimpleGraph {
    sample_regular(n, d, BENCH_SEED).expect("valid parameters")
}

pub fn planted(base: &str, m: usize) -> LiftedGraph {
    random_lift(&builtin(base).expect("built-in base"), m, BENCH_SEED).expect("valid lift")
}
