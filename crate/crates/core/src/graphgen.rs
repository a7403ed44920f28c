//! Arena generators: Moore lattice, Erdős–Rényi, Barabási–Albert and the
//! Delaunay graph of a jittered square lattice.
//!
//! Every generator is a pure function of its parameters and seed.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{self, Point2D};
use crate::graph::Graph;

/// Attempts allowed before an Erdős–Rényi draw is declared disconnected.
pub const ER_MAX_ATTEMPTS: usize = 10_000;

/// Non-periodic `side × side` lattice where each node links to its eight
/// surrounding cells (orthogonal and diagonal).
pub fn make_reg(side: usize) -> Result<Graph> {
    if side == 0 {
        return Err(Error::InvalidParameter("lattice side must be at least 1".into()));
    }
    let id = |r: usize, c: usize| r * side + c;
    let mut edges = BTreeSet::new();
    for r in 0..side {
        for c in 0..side {
            let right = c + 1 < side;
            let down = r + 1 < side;
            if right {
                edges.insert((id(r, c), id(r, c + 1)));
            }
            if down {
                edges.insert((id(r, c), id(r + 1, c)));
                if right {
                    edges.insert((id(r, c), id(r + 1, c + 1)));
                }
                if c > 0 {
                    edges.insert((id(r, c), id(r + 1, c - 1)));
                }
            }
        }
    }
    Ok(Graph::from_edge_set(side * side, edges))
}

/// `G(n, p)` with `p = avg_degree / (n - 1)`, redrawn until connected.
pub fn make_er(n: usize, avg_degree: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("ER needs n >= 2, got {n}")));
    }
    if !(avg_degree > 0.0 && avg_degree <= (n - 1) as f64) {
        return Err(Error::InvalidParameter(format!(
            "average degree {avg_degree} outside (0, {}]",
            n - 1
        )));
    }
    let p = avg_degree / (n - 1) as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ER_MAX_ATTEMPTS {
        let mut edges = BTreeSet::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen::<f64>() < p {
                    edges.insert((i, j));
                }
            }
        }
        let graph = Graph::from_edge_set(n, edges);
        if graph.is_connected() {
            return Ok(graph);
        }
    }
    Err(Error::GenerationFailure(format!(
        "no connected G({n}, {p:.4}) within {ER_MAX_ATTEMPTS} attempts"
    )))
}

/// Barabási–Albert growth from an `m0`-node ring. Each new node picks `m`
/// distinct existing targets, one at a time, with probability proportional
/// to current degree among the targets not yet picked.
pub fn make_ba(n: usize, m: usize, m0: usize, seed: u64) -> Result<Graph> {
    if m == 0 || m > m0 {
        return Err(Error::InvalidParameter(format!("BA needs 1 <= m <= m0, got m={m}, m0={m0}")));
    }
    if m0 < 3 {
        return Err(Error::InvalidParameter(format!("BA seed ring needs m0 >= 3, got {m0}")));
    }
    if n < m0 {
        return Err(Error::InvalidParameter(format!("BA needs n >= m0, got n={n}, m0={m0}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    let mut degree = vec![0u64; n];
    for i in 0..m0 {
        let j = (i + 1) % m0;
        edges.insert((i.min(j), i.max(j)));
        degree[i] += 1;
        degree[j] += 1;
    }
    let mut picked = Vec::with_capacity(m);
    for new in m0..n {
        picked.clear();
        for _ in 0..m {
            let total: u64 = (0..new).filter(|v| !picked.contains(v)).map(|v| degree[v]).sum();
            let mut ticket = rng.gen_range(0..total);
            let target = (0..new)
                .filter(|v| !picked.contains(v))
                .find(|&v| {
                    if ticket < degree[v] {
                        true
                    } else {
                        ticket -= degree[v];
                        false
                    }
                })
                .expect("ticket falls inside the total weight");
            picked.push(target);
        }
        for &t in &picked {
            edges.insert((t, new));
            degree[t] += 1;
            degree[new] += 1;
        }
    }
    Ok(Graph::from_edge_set(n, edges))
}

/// Delaunay graph of a `side × side` integer lattice whose coordinates are
/// each displaced by an independent uniform draw in `[-perturbation, perturbation]`.
/// Node `r * side + c` starts at `(c, r)`.
pub fn make_geo(side: usize, perturbation: f64, seed: u64) -> Result<Graph> {
    if side < 2 {
        return Err(Error::InvalidParameter(format!("GEO lattice side must be >= 2, got {side}")));
    }
    if !(0.0..0.5).contains(&perturbation) {
        return Err(Error::InvalidParameter(format!(
            "perturbation {perturbation} outside [0, 0.5)"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jitter = || {
        if perturbation > 0.0 {
            rng.gen_range(-perturbation..=perturbation)
        } else {
            0.0
        }
    };
    let mut points = Vec::with_capacity(side * side);
    for r in 0..side {
        for c in 0..side {
            let x = c as f64 + jitter();
            let y = r as f64 + jitter();
            points.push(Point2D::new(x, y));
        }
    }
    let edges = geometry::delaunay(&points)?;
    Graph::from_edge_set(points.len(), edges).with_positions(points)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TopologyKind {
    Reg,
    Er,
    Ba,
    Geo,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [TopologyKind::Reg, TopologyKind::Er, TopologyKind::Ba, TopologyKind::Geo];

    pub fn label(self) -> &'static str {
        match self {
            TopologyKind::Reg => "REG",
            TopologyKind::Er => "ER",
            TopologyKind::Ba => "BA",
            TopologyKind::Geo => "GEO",
        }
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "reg" => Ok(TopologyKind::Reg),
            "er" => Ok(TopologyKind::Er),
            "ba" => Ok(TopologyKind::Ba),
            "geo" | "vr" => Ok(TopologyKind::Geo),
            other => Err(Error::InvalidParameter(format!("unknown topology '{other}'"))),
        }
    }
}

/// A topology with all generator parameters bound; the desk-scale defaults
/// give 25-node arenas with average degrees 5.76 (REG), ~5 (ER), 3.76 (BA)
/// and ~5.08 (GEO).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Topology {
    Reg { side: usize },
    Er { n: usize, avg_degree: f64 },
    Ba { n: usize, m: usize, m0: usize },
    Geo { side: usize, perturbation: f64 },
}

impl Topology {
    pub fn default_for(kind: TopologyKind) -> Self {
        match kind {
            TopologyKind::Reg => Topology::Reg { side: 5 },
            TopologyKind::Er => Topology::Er { n: 25, avg_degree: 5.0 },
            TopologyKind::Ba => Topology::Ba { n: 25, m: 2, m0: 3 },
            TopologyKind::Geo => Topology::Geo { side: 5, perturbation: 0.25 },
        }
    }

    pub fn kind(&self) -> TopologyKind {
        match self {
            Topology::Reg { .. } => TopologyKind::Reg,
            Topology::Er { .. } => TopologyKind::Er,
            Topology::Ba { .. } => TopologyKind::Ba,
            Topology::Geo { .. } => TopologyKind::Geo,
        }
    }

    /// REG ignores the seed.
    pub fn generate(&self, seed: u64) -> Result<Graph> {
        match *self {
            Topology::Reg { side } => make_reg(side),
            Topology::Er { n, avg_degree } => make_er(n, avg_degree, seed),
            Topology::Ba { n, m, m0 } => make_ba(n, m, m0, seed),
            Topology::Geo { side, perturbation } => make_geo(side, perturbation, seed),
        }
    }
}
