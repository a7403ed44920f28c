//! Undirected simple graphs used as game arenas.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2D;

/// Undirected simple graph on nodes `0..node_count`.
///
/// Edges are stored once as `(i, j)` with `i < j`, sorted lexicographically.
/// Adjacency lists are derived from the edge set and sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    node_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    positions: Option<Vec<Point2D>>,
}

impl Graph {
    /// Builds a graph from an edge list. Pairs may come in either orientation;
    /// self-loops, out-of-range ids and duplicates are rejected.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if node_count == 0 {
            return Err(Error::InvalidParameter("graph needs at least one node".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::InvalidInput(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a == b {
                return Err(Error::InvalidInput(format!("self-loop on node {a}")));
            }
            let key = (a.min(b), a.max(b));
            if !set.insert(key) {
                return Err(Error::InvalidInput(format!("duplicate edge ({}, {})", key.0, key.1)));
            }
        }
        Ok(Self::from_sorted_unique(node_count, set.into_iter().collect()))
    }

    pub(crate) fn from_edge_set(node_count: usize, set: BTreeSet<(usize, usize)>) -> Self {
        Self::from_sorted_unique(node_count, set.into_iter().collect())
    }

    fn from_sorted_unique(node_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Graph { node_count, edges, adjacency, positions: None }
    }

    pub fn with_positions(mut self, positions: Vec<Point2D>) -> Result<Self> {
        if positions.len() != self.node_count {
            return Err(Error::InvalidInput(format!(
                "{} positions for {} nodes",
                positions.len(),
                self.node_count
            )));
        }
        self.positions = Some(positions);
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn average_degree(&self) -> f64 {
        2.0 * self.edges.len() as f64 / self.node_count as f64
    }

    pub fn positions(&self) -> Option<&[Point2D]> {
        self.positions.as_deref()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.node_count && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.node_count];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == self.node_count
    }

    /// Checks the structural invariants: contiguous ids, no loops, no
    /// duplicates, symmetric adjacency consistent with the edge list.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidInput(msg));
        if self.adjacency.len() != self.node_count {
            return bad("adjacency length differs from node count".into());
        }
        for w in self.edges.windows(2) {
            if w[0] >= w[1] {
                return bad(format!("edges not strictly sorted at {:?}", w[1]));
            }
        }
        let mut half_degree = 0;
        for &(a, b) in &self.edges {
            if a >= b || b >= self.node_count {
                return bad(format!("malformed edge ({a}, {b})"));
            }
            if !self.has_edge(a, b) || !self.has_edge(b, a) {
                return bad(format!("edge ({a}, {b}) missing from adjacency"));
            }
        }
        for (u, list) in self.adjacency.iter().enumerate() {
            half_degree += list.len();
            if list.contains(&u) {
                return bad(format!("self-loop on node {u}"));
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return bad(format!("adjacency of node {u} unsorted or duplicated"));
            }
        }
        if half_degree != 2 * self.edges.len() {
            return bad("degree sum does not match edge count".into());
        }
        Ok(())
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            n: self.node_count,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            positions: self
                .positions
                .as_ref()
                .map(|ps| ps.iter().map(|p| [p.x, p.y]).collect()),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let graph = Graph::from_edges(file.n, file.edges.iter().map(|e| (e[0], e[1])))?;
        match &file.positions {
            Some(ps) => graph.with_positions(ps.iter().map(|p| Point2D::new(p[0], p[1])).collect()),
            None => Ok(graph),
        }
    }

    /// Canonical single-line JSON, terminated by a newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(&self.to_file()).expect("graph serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(text)?;
        Self::from_file(&file)
    }
}

/// On-disk form: `{"n": int, "edges": [[i,j],...], "positions": [[x,y],...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<[f64; 2]>>,
}
