use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    HeavyHex,
    SquareLattice,
    AllToAll,
    Custom,
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::HeavyHex => "heavy-hex",
            TopologyKind::SquareLattice => "square-lattice",
            TopologyKind::AllToAll => "all-to-all",
            TopologyKind::Custom => "custom",
        })
    }
}

/// Parameters for [`build_topology`], as stored in device files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TopologySpec {
    /// `rows` long rows of `4 * cells + 3` qubits joined by bridge qubits.
    /// `rows = 7, cells = 3` is the 127-qubit Eagle layout.
    HeavyHex { rows: usize, cells: usize },
    SquareLattice { rows: usize, cols: usize },
    AllToAll { nodes: usize },
    Custom { nodes: usize, edges: Vec<(usize, usize)> },
}

/// Undirected, connected coupling graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    kind: TopologyKind,
    adjacency: Vec<Vec<usize>>,
    edges: BTreeSet<(usize, usize)>,
}

pub fn build_topology(spec: &TopologySpec) -> Result<Topology> {
    match spec {
        TopologySpec::AllToAll { nodes } => {
            let edges = (0..*nodes).flat_map(|i| ((i + 1)..*nodes).map(move |j| (i, j)));
            Topology::from_edges(TopologyKind::AllToAll, *nodes, edges)
        }
        TopologySpec::SquareLattice { rows, cols } => {
            let (r, c) = (*rows, *cols);
            let id = |i: usize, j: usize| i * c + j;
            let mut edges = Vec::new();
            for i in 0..r {
                for j in 0..c {
                    if j + 1 < c {
                        edges.push((id(i, j), id(i, j + 1)));
                    }
                    if i + 1 < r {
                        edges.push((id(i, j), id(i + 1, j)));
                    }
                }
            }
            Topology::from_edges(TopologyKind::SquareLattice, r * c, edges)
        }
        TopologySpec::HeavyHex { rows, cells } => heavy_hex(*rows, *cells),
        TopologySpec::Custom { nodes, edges } => {
            Topology::from_edges(TopologyKind::Custom, *nodes, edges.iter().copied())
        }
    }
}

fn heavy_hex(rows: usize, cells: usize) -> Result<Topology> {
    if rows < 2 || cells == 0 {
        return Err(Error::Topology(format!(
            "heavy-hex needs at least 2 rows and 1 cell, got {rows} x {cells}"
        )));
    }
    let width = 4 * cells + 3;
    let bridge_cols = |b: usize| -> Vec<usize> {
        let offset = if b.is_multiple_of(2) { 0 } else { 2 };
        (0..=cells).map(|k| offset + 4 * k).collect()
    };
    // Row ends on the outer rows with no bridge would dangle; drop them.
    let keep = |r: usize, col: usize| -> bool {
        let edge_col = col == 0 || col == width - 1;
        if !edge_col {
            return true;
        }
        let above = r > 0 && bridge_cols(r - 1).contains(&col);
        let below = r + 1 < rows && bridge_cols(r).contains(&col);
        !((r == 0 || r + 1 == rows) && !above && !below)
    };

    let mut ids = vec![vec![None; width]; rows];
    let mut bridge_ids = Vec::new();
    let mut next = 0;
    for r in 0..rows {
        for (col, slot) in ids[r].iter_mut().enumerate() {
            if keep(r, col) {
                *slot = Some(next);
                next += 1;
            }
        }
        if r + 1 < rows {
            let ids_b: Vec<(usize, usize)> = bridge_cols(r)
                .into_iter()
                .map(|col| {
                    next += 1;
                    (col, next - 1)
                })
                .collect();
            bridge_ids.push(ids_b);
        }
    }

    let mut edges = Vec::new();
    for (r, row) in ids.iter().enumerate() {
        for w in row.windows(2) {
            if let (Some(a), Some(b)) = (w[0], w[1]) {
                edges.push((a, b));
            }
        }
        if r + 1 < rows {
            for &(col, b) in &bridge_ids[r] {
                let up = ids[r][col].expect("bridge endpoint kept");
                let down = ids[r + 1][col].expect("bridge endpoint kept");
                edges.push((up, b));
                edges.push((b, down));
            }
        }
    }
    Topology::from_edges(TopologyKind::HeavyHex, next, edges)
}

impl Topology {
    /// Validates and deduplicates `edges`; the result must be connected.
    pub fn from_edges(
        kind: TopologyKind,
        nodes: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        if nodes == 0 {
            return Err(Error::Topology("topology has no nodes".into()));
        }
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Topology(format!("self-loop on node {a}")));
            }
            if a >= nodes || b >= nodes {
                return Err(Error::Topology(format!(
                    "edge ({a}, {b}) outside {nodes} nodes"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        let mut adjacency = vec![Vec::new(); nodes];
        for &(a, b) in &set {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        adjacency.iter_mut().for_each(|v| v.sort_unstable());
        let t = Topology {
            kind,
            adjacency,
            edges: set,
        };
        let reached = t.bfs_order(0).len();
        if reached != nodes {
            return Err(Error::Topology(format!(
                "graph is disconnected: {reached} of {nodes} nodes reachable from node 0"
            )));
        }
        Ok(t)
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn num_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn mean_degree(&self) -> f64 {
        2.0 * self.num_edges() as f64 / self.num_nodes() as f64
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Breadth-first visiting order from `start`, neighbors in ascending order.
    pub fn bfs_order(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.num_nodes()];
        let mut order = Vec::with_capacity(self.num_nodes());
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        order
    }

    /// Shortest path `from -> to` inclusive. Among equal-length paths the
    /// one whose nodes are discovered first by an ascending-neighbor BFS
    /// wins, so results are deterministic.
    pub fn shortest_path(&self, from: usize, to: usize) -> Vec<usize> {
        let mut parent = vec![usize::MAX; self.num_nodes()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &w in &self.adjacency[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut path = vec![to];
        let mut v = to;
        while v != from {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        path
    }
}
