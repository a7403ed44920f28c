//! Fixtures shared by the benchmarks.

use netgames::graphgen::{Topology, TopologyKind};
use netgames::montecarlo::arena_seed;
use netgames::simnet::FeatureMatrix;
use netgames::Graph;

pub const BASE_SEED: u64 = 2024;

/// The default 25-node arena of each kind, as a sweep would build it.
pub fn arena(kind: TopologyKind) -> Graph {
    Topology::default_for(kind).generate(arena_seed(BASE_SEED, kind)).expect("default arena")
}

/// `n` rows of `m` mixed-sign values from a fixed LCG, standardized.
pub fn feature_matrix(n: usize, m: usize) -> FeatureMatrix {
    let mut x: u64 = 0x2545_F491_4F6C_DD1D;
    let mut next = || {
        x = x.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
        (x >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let rows = (0..n).map(|_| (0..m).map(|_| next()).collect()).collect();
    let labels = (0..n).map(|i| format!("c{i}")).collect();
    let columns = (0..m).map(|j| format!("f{j}")).collect();
    FeatureMatrix::new(labels, columns, rows).expect("finite rows").standardize().expect("no constant column")
}
