use std::collections::BTreeMap;

use netgames::graphgen::{make_ba, make_er, make_geo, make_reg, Topology, TopologyKind};
use netgames::Graph;
use proptest::prelude::*;

const SEEDS: u64 = 1000;

fn degree_multiset(g: &Graph) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for v in 0..g.node_count() {
        *h.entry(g.neighbors(v).len()).or_insert(0) += 1;
    }
    h
}

fn mean_degree_over_seeds(f: impl Fn(u64) -> Graph) -> f64 {
    (0..SEEDS).map(|s| f(s).average_degree()).sum::<f64>() / SEEDS as f64
}

#[test]
fn reg_degrees_are_exact() {
    let g = make_reg(5).unwrap();
    assert_eq!(g.edge_count(), 72);
    assert_eq!(g.average_degree(), 5.76);
    assert_eq!(degree_multiset(&g), BTreeMap::from([(3, 4), (5, 12), (8, 9)]));
    // Moore neighbourhood by coordinates.
    for a in 0..25usize {
        for b in (a + 1)..25 {
            let (dx, dy) = ((a % 5).abs_diff(b % 5), (a / 5).abs_diff(b / 5));
            assert_eq!(g.has_edge(a, b), dx <= 1 && dy <= 1, "{a} {b}");
        }
    }
}

#[test]
fn ba_edge_count_and_hubs_on_every_seed() {
    for seed in 0..SEEDS {
        let g = make_ba(25, 2, 3, seed).unwrap();
        g.validate().unwrap();
        assert_eq!(g.edge_count(), 47);
        assert_eq!(g.average_degree(), 3.76);
        let mut d = g.degrees();
        d.sort_unstable();
        assert!(d[24] > d[12], "seed {seed}: no hub in {d:?}");
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && g.has_edge(0, 2));
    }
}

#[test]
fn er_mean_degree_over_seeds() {
    let mean = mean_degree_over_seeds(|s| make_er(25, 5.0, s).unwrap());
    assert!((mean - 5.0).abs() <= 0.3, "mean {mean}");
}

#[test]
fn geo_mean_degree_over_seeds() {
    let mean = mean_degree_over_seeds(|s| make_geo(5, 0.25, s).unwrap());
    assert!((mean - 5.08).abs() <= 0.15, "mean {mean}");
}

#[test]
fn er_and_geo_are_valid_and_connected_on_every_seed() {
    for seed in 0..SEEDS {
        let er = make_er(25, 5.0, seed).unwrap();
        er.validate().unwrap();
        assert!(er.is_connected(), "er seed {seed}");
        let geo = make_geo(5, 0.25, seed).unwrap();
        geo.validate().unwrap();
        assert!(geo.is_connected(), "geo seed {seed}");
        assert!(geo.edge_count() <= 3 * 25 - 6);
        // The lattice edges of a slightly jittered grid always survive.
        for v in 0..25 {
            if v % 5 < 4 {
                assert!(geo.has_edge(v, v + 1), "geo seed {seed}: {v}");
            }
            if v < 20 {
                assert!(geo.has_edge(v, v + 5), "geo seed {seed}: {v}");
            }
        }
    }
}

#[test]
fn perfect_grid_has_one_diagonal_per_cell() {
    let g = make_geo(5, 0.0, 0).unwrap();
    g.validate().unwrap();
    assert_eq!(g.edge_count(), 40 + 16);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generators_are_deterministic(kind in prop::sample::select(TopologyKind::ALL.to_vec()), seed in any::<u64>()) {
        let t = Topology::default_for(kind);
        let a = t.generate(seed).unwrap();
        prop_assert_eq!(a.to_json(), t.generate(seed).unwrap().to_json());
        a.validate().unwrap();
        prop_assert_eq!(a.node_count(), 25);
    }

    #[test]
    fn er_respects_its_parameters(n in 2usize..40, frac in 0.2f64..1.0, seed in any::<u64>()) {
        let avg = frac * (n - 1) as f64;
        if let Ok(g) = make_er(n, avg, seed) {
            g.validate().unwrap();
            prop_assert!(g.is_connected());
            prop_assert_eq!(g.node_count(), n);
        }
    }

    #[test]
    fn ba_edge_formula(m0 in 3usize..8, extra in 0usize..30, m_pick in 0usize..8, seed in any::<u64>()) {
        let m = 1 + m_pick % m0;
        let n = m0 + extra;
        let g = make_ba(n, m, m0, seed).unwrap();
        g.validate().unwrap();
        prop_assert_eq!(g.edge_count(), m0 + m * (n - m0));
    }
}

#[test]
fn bad_parameters_are_rejected() {
    assert!(make_reg(0).is_err());
    assert!(make_er(25, 25.0, 0).is_err());
    assert!(make_er(1, 0.5, 0).is_err());
    assert!(make_ba(25, 4, 3, 0).is_err());
    assert!(make_ba(25, 1, 2, 0).is_err());
    assert!(make_geo(5, 0.5, 0).is_err());
    assert!(make_geo(1, 0.1, 0).is_err());
}
