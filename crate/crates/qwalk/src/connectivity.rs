//! The four connectivity measures: vertex, edge, algebraic, and normalized
//! algebraic.
//!
//! Vertex and edge connectivity are exact, computed by unit-capacity max
//! flow (Edmonds-Karp). The spectral measures come from the dense
//! eigendecomposition of the Laplacian and normalized Laplacian.

use std::collections::VecDeque;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral;

/// Residual-capacity flow network with paired forward/backward arcs.
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
}

impl FlowNetwork {
    pub fn new(n: usize) -> FlowNetwork {
        FlowNetwork {
            adj: vec![Vec::new(); n],
            to: Vec::new(),
            cap: Vec::new(),
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize, cap: i64) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(cap);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
    }

    /// Edmonds-Karp: shortest augmenting paths until none remains.
    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        loop {
            let mut parent_edge = vec![usize::MAX; self.adj.len()];
            let mut queue = VecDeque::from([s]);
            parent_edge[s] = usize::MAX - 1;
            'bfs: while let Some(u) = queue.pop_front() {
                for &e in &self.adj[u] {
                    let v = self.to[e];
                    if self.cap[e] > 0 && parent_edge[v] == usize::MAX {
                        parent_edge[v] = e;
                        if v == t {
                            break 'bfs;
                        }
                        queue.push_back(v);
                    }
                }
            }
            if parent_edge[t] == usize::MAX {
                return flow;
            }
            let mut bottleneck = i64::MAX;
            let mut v = t;
            while v != s {
                let e = parent_edge[v];
                bottleneck = bottleneck.min(self.cap[e]);
                v = self.to[e ^ 1];
            }
            let mut v = t;
            while v != s {
                let e = parent_edge[v];
                self.cap[e] -= bottleneck;
                self.cap[e ^ 1] += bottleneck;
                v = self.to[e ^ 1];
            }
            flow += bottleneck;
        }
    }
}

/// Maximum s -> t flow in a directed unit-capacity graph.
pub fn max_flow(n: usize, arcs: &[(usize, usize)], s: usize, t: usize) -> Result<usize> {
    if s == t {
        return Err(Error::InvalidParameter("max flow needs s != t".into()));
    }
    for &(u, v) in arcs {
        if u >= n {
            return Err(Error::VertexOutOfRange { vertex: u, n });
        }
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if s >= n {
        return Err(Error::VertexOutOfRange { vertex: s, n });
    }
    if t >= n {
        return Err(Error::VertexOutOfRange { vertex: t, n });
    }
    let mut net = FlowNetwork::new(n);
    for &(u, v) in arcs {
        net.add_edge(u, v, 1);
    }
    Ok(net.max_flow(s, t) as usize)
}

/// Max flow between two vertices in the vertex-split network: each vertex
/// becomes an in/out pair with unit internal capacity, so the flow value is
/// the number of internally disjoint paths.
fn vertex_cut_flow(g: &Graph, s: usize, t: usize) -> usize {
    let n = g.n();
    let inf = n as i64;
    let mut net = FlowNetwork::new(2 * n);
    for v in 0..n {
        net.add_edge(2 * v, 2 * v + 1, 1);
    }
    for &(u, v) in g.edges() {
        net.add_edge(2 * u + 1, 2 * v, inf);
        net.add_edge(2 * v + 1, 2 * u, inf);
    }
    net.max_flow(2 * s + 1, 2 * t) as usize
}

/// Minimum number of vertex deletions that disconnect the graph; `n - 1`
/// for complete graphs by convention. Disconnected input reports 0.
///
/// Uses the standard reduction: it suffices to minimize over one fixed
/// vertex against its non-neighbors and over that vertex's neighbors
/// against theirs, since a minimum cut misses either the fixed vertex or
/// one of its neighbors.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return 0;
    }
    if g.edges().len() == n * (n - 1) / 2 {
        return n - 1;
    }
    let s0 = (0..n).min_by_key(|&v| g.degree(v)).expect("n >= 2");
    let mut best = usize::MAX;
    let mut sources = vec![s0];
    sources.extend_from_slice(g.neighbors(s0));
    for s in sources {
        for t in 0..n {
            if t != s && !g.has_edge(s, t) {
                best = best.min(vertex_cut_flow(g, s, t));
            }
        }
    }
    best
}

/// Minimum edge-cut size; 0 for disconnected input.
pub fn edge_connectivity(g: &Graph) -> usize {
    let n = g.n();
    if n < 2 || !g.is_connected() {
        return 0;
    }
    let mut best = usize::MAX;
    for t in 1..n {
        let mut net = FlowNetwork::new(n);
        for &(u, v) in g.edges() {
            net.add_edge(u, v, 1);
            net.add_edge(v, u, 1);
        }
        best = best.min(net.max_flow(0, t) as usize);
    }
    best
}

fn second_smallest_eigenvalue(m: &DMatrix<f64>) -> f64 {
    let eig = spectral::hermitian_eig(m).expect("graph matrices are symmetric by construction");
    eig.eigenvalues()[1].max(0.0)
}

/// Second-smallest eigenvalue of the graph Laplacian; 0 for disconnected
/// input.
pub fn algebraic_connectivity(g: &Graph) -> f64 {
    if g.n() < 2 || !g.is_connected() {
        return 0.0;
    }
    second_smallest_eigenvalue(&g.laplacian())
}

/// Second-smallest eigenvalue of the normalized Laplacian; 0 for
/// disconnected input. Errors if some vertex is isolated.
pub fn normalized_algebraic_connectivity(g: &Graph) -> Result<f64> {
    if g.n() < 2 || !g.is_connected() {
        g.normalized_laplacian()?; // still reject isolated vertices
        return Ok(0.0);
    }
    Ok(second_smallest_eigenvalue(&g.normalized_laplacian()?))
}

/// All four connectivity measures plus the degree range.
#[derive(Clone, Debug, Serialize)]
pub struct ConnectivityReport {
    pub graph: String,
    pub n: usize,
    pub degree_min: usize,
    pub degree_max: usize,
    pub vertex_connectivity: usize,
    pub edge_connectivity: usize,
    pub algebraic_connectivity: f64,
    pub normalized_algebraic_connectivity: f64,
}

pub fn connectivity_report(g: &Graph) -> Result<ConnectivityReport> {
    let degrees = g.degrees();
    Ok(ConnectivityReport {
        graph: g
            .family()
            .map(|f| f.to_string())
            .unwrap_or_else(|| "custom".to_string()),
        n: g.n(),
        degree_min: degrees.iter().copied().min().unwrap_or(0),
        degree_max: degrees.iter().copied().max().unwrap_or(0),
        vertex_connectivity: vertex_connectivity(g),
        edge_connectivity: edge_connectivity(g),
        algebraic_connectivity: algebraic_connectivity(g),
        normalized_algebraic_connectivity: normalized_algebraic_connectivity(g)?,
    })
}
