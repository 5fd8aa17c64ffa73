//! Graph families and their matrices.
//!
//! Every builder returns a connected simple graph with a fixed, documented
//! vertex indexing so that marked-vertex choices and golden files are stable:
//!
//! - `complete`: vertices `0..n`.
//! - `paley`: residues `0..q`.
//! - `rook`, `latin_square`: cell `(r, c)` of the m x m grid is vertex `r*m + c`.
//! - `hypercube`: vertex index is the bit string itself.
//! - `cubic`: coordinates little-endian mixed radix, `v = sum_i x_i * side^i`.
//! - `joined_complete`: left clique `0..N/2` with the bridge at `N/2 - 1`,
//!   right clique `N/2..N` with the bridge at `N/2`.
//! - `simplex_complete`: clique `i` occupies `i*M..(i+1)*M`; vertex `v` of
//!   clique `i` carries the single edge to clique `j`, where `j` is the
//!   `v`-th element of `{0..=M} \ {i}` in ascending order, landing on the
//!   reciprocal position there.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Graph family tag with its construction parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Family {
    Complete { n: usize },
    Paley { q: usize },
    Rook { m: usize },
    LatinSquare { m: usize },
    Hypercube { d: usize },
    Cubic { d: usize, side: usize },
    JoinedComplete { n: usize },
    SimplexComplete { m: usize },
}

impl Family {
    /// Parse a spec string of the form `family:key=val[,key=val]`.
    pub fn parse(s: &str) -> Result<Family> {
        let (name, rest) = match s.find(':') {
            Some(i) => (&s[..i], Some(&s[i + 1..])),
            None => (s, None),
        };
        let body_pos = name.len() + 1;
        let mut pairs: Vec<(String, usize, usize)> = Vec::new();
        if let Some(rest) = rest {
            let mut pos = body_pos;
            for part in rest.split(',') {
                let eq = part.find('=').ok_or(Error::Parse {
                    pos,
                    msg: format!("expected key=value, got {part:?}"),
                })?;
                let key = part[..eq].trim();
                let val_str = part[eq + 1..].trim();
                let val: usize = val_str.parse().map_err(|_| Error::Parse {
                    pos: pos + eq + 1,
                    msg: format!("value for {key:?} is not a non-negative integer: {val_str:?}"),
                })?;
                pairs.push((key.to_ascii_lowercase(), val, pos));
                pos += part.len() + 1;
            }
        }

        let mut take = |key: &str| -> Result<usize> {
            match pairs.iter().position(|(k, _, _)| k == key) {
                Some(i) => Ok(pairs.remove(i).1),
                None => Err(Error::Parse {
                    pos: body_pos,
                    msg: format!("missing key {key:?} for family {name:?}"),
                }),
            }
        };

        let family = match name {
            "complete" => Family::Complete { n: take("n")? },
            "paley" => Family::Paley { q: take("q")? },
            "rook" => Family::Rook { m: take("m")? },
            "latin_square" => Family::LatinSquare { m: take("m")? },
            "hypercube" => Family::Hypercube { d: take("d")? },
            "cubic" => Family::Cubic {
                d: take("d")?,
                side: take("side")?,
            },
            "joined_complete" => Family::JoinedComplete { n: take("n")? },
            "simplex_complete" => Family::SimplexComplete { m: take("m")? },
            other => {
                return Err(Error::Parse {
                    pos: 0,
                    msg: format!("unknown family {other:?}"),
                })
            }
        };
        if let Some((key, _, pos)) = pairs.into_iter().next() {
            return Err(Error::Parse {
                pos,
                msg: format!("unexpected key {key:?} for family {name:?}"),
            });
        }
        Ok(family)
    }

    /// Build the graph this spec describes.
    pub fn build(&self) -> Result<Graph> {
        match *self {
            Family::Complete { n } => build_complete(n),
            Family::Paley { q } => build_paley(q),
            Family::Rook { m } => build_rook(m),
            Family::LatinSquare { m } => build_latin_square(m),
            Family::Hypercube { d } => build_hypercube(d),
            Family::Cubic { d, side } => build_cubic_lattice(d, side),
            Family::JoinedComplete { n } => build_joined_complete(n),
            Family::SimplexComplete { m } => build_simplex_complete(m),
        }
    }

    /// Canonical marked vertex for search experiments.
    ///
    /// Vertex 0 everywhere: off-bridge for the joined graph, and an arbitrary
    /// choice for the vertex-transitive families.
    pub fn default_marked(&self) -> usize {
        0
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::parse(s)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Complete { n } => write!(f, "complete:n={n}"),
            Family::Paley { q } => write!(f, "paley:q={q}"),
            Family::Rook { m } => write!(f, "rook:m={m}"),
            Family::LatinSquare { m } => write!(f, "latin_square:m={m}"),
            Family::Hypercube { d } => write!(f, "hypercube:d={d}"),
            Family::Cubic { d, side } => write!(f, "cubic:d={d},side={side}"),
            Family::JoinedComplete { n } => write!(f, "joined_complete:N={n}"),
            Family::SimplexComplete { m } => write!(f, "simplex_complete:M={m}"),
        }
    }
}

/// Undirected simple graph with optional family metadata.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    neighbors: Vec<Vec<usize>>,
    family: Option<Family>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    family: Option<Family>,
}

impl Graph {
    /// Build a graph from an edge list. Rejects self-loops, out-of-range
    /// endpoints, and duplicate pairs.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut norm: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { vertex: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at vertex {u}")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter(format!(
                "duplicate edge ({}, {})",
                w[0].0, w[0].1
            )));
        }
        let mut neighbors = vec![Vec::new(); n];
        for &(u, v) in &norm {
            neighbors[u].push(v);
            neighbors[v].push(u);
        }
        for adj in &mut neighbors {
            adj.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: norm,
            neighbors,
            family: None,
        })
    }

    fn with_family(mut self, family: Family) -> Graph {
        self.family = Some(family);
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn family(&self) -> Option<&Family> {
        self.family.as_ref()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.neighbors.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors[u].binary_search(&v).is_ok()
    }

    /// Breadth-first reachability from vertex 0.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// BFS distances from `source`; `usize::MAX` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        dist[source] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.neighbors[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Adjacency matrix A (symmetric 0/1, zero diagonal).
    pub fn adjacency_matrix(&self) -> DMatrix<f64> {
        let mut a = DMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            a[(u, v)] = 1.0;
            a[(v, u)] = 1.0;
        }
        a
    }

    /// Diagonal degree matrix D.
    pub fn degree_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            self.n,
            self.neighbors.iter().map(|adj| adj.len() as f64),
        ))
    }

    /// Graph Laplacian L = D - A.
    pub fn laplacian(&self) -> DMatrix<f64> {
        let mut l = self.degree_matrix();
        for &(u, v) in &self.edges {
            l[(u, v)] = -1.0;
            l[(v, u)] = -1.0;
        }
        l
    }

    /// Normalized Laplacian with unit diagonal and off-diagonal entries
    /// `-1/sqrt(deg(i) deg(j))` on edges. Errors on isolated vertices.
    pub fn normalized_laplacian(&self) -> Result<DMatrix<f64>> {
        if let Some(v) = (0..self.n).find(|&v| self.degree(v) == 0) {
            return Err(Error::IsolatedVertex(v));
        }
        let mut l = DMatrix::identity(self.n, self.n);
        for &(u, v) in &self.edges {
            let w = -1.0 / ((self.degree(u) * self.degree(v)) as f64).sqrt();
            l[(u, v)] = w;
            l[(v, u)] = w;
        }
        Ok(l)
    }

    /// All four matrices (A, D, L, normalized L) at once.
    pub fn matrices(&self) -> Result<GraphMatrices> {
        Ok(GraphMatrices {
            adjacency: self.adjacency_matrix(),
            degree: self.degree_matrix(),
            laplacian: self.laplacian(),
            normalized_laplacian: self.normalized_laplacian()?,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson {
            n: self.n,
            edges: self.edges.clone(),
            family: self.family,
        })
        .expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Graph> {
        let raw: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse {
            pos: e.column().saturating_sub(1),
            msg: e.to_string(),
        })?;
        let mut g = Graph::from_edges(raw.n, raw.edges)?;
        g.family = raw.family;
        Ok(g)
    }

    /// One `i j` pair per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parse edge-list text; the vertex count is the largest index plus one.
    pub fn from_edge_list(s: &str) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut max = 0usize;
        for (lineno, line) in s.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or(Error::Parse {
                    pos: lineno,
                    msg: format!("line {}: expected two vertex indices", lineno + 1),
                })?
                .parse()
                .map_err(|_| Error::Parse {
                    pos: lineno,
                    msg: format!("line {}: invalid vertex index", lineno + 1),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::Parse {
                    pos: lineno,
                    msg: format!("line {}: trailing tokens", lineno + 1),
                });
            }
            max = max.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(Error::InvalidParameter("empty edge list".into()));
        }
        Graph::from_edges(max + 1, edges)
    }
}

/// The matrices derived from a graph.
pub struct GraphMatrices {
    pub adjacency: DMatrix<f64>,
    pub degree: DMatrix<f64>,
    pub laplacian: DMatrix<f64>,
    pub normalized_laplacian: DMatrix<f64>,
}

/// Complete graph on `n` vertices.
pub fn build_complete(n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "complete graph needs n >= 1".into(),
        ));
    }
    let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    Ok(Graph::from_edges(n, edges)?.with_family(Family::Complete { n }))
}

fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Paley graph on a prime `q = 1 (mod 4)`: residues adjacent when their
/// difference is a nonzero quadratic residue.
pub fn build_paley(q: usize) -> Result<Graph> {
    if !is_prime(q) {
        return Err(Error::InvalidParameter(format!(
            "paley modulus {q} is not prime"
        )));
    }
    if q % 4 != 1 {
        return Err(Error::InvalidParameter(format!(
            "paley modulus {q} must be congruent to 1 mod 4"
        )));
    }
    let mut residue = vec![false; q];
    for x in 1..q {
        residue[x * x % q] = true;
    }
    let edges = (0..q).flat_map(|u| {
        let residue = &residue;
        (u + 1..q).filter_map(move |v| residue[v - u].then_some((u, v)))
    });
    Ok(Graph::from_edges(q, edges)?.with_family(Family::Paley { q }))
}

/// Rook's graph on the m x m grid: cells adjacent when they share a row or
/// column. Strongly regular with parameters (m^2, 2(m-1), m-2, 2).
pub fn build_rook(m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(Error::InvalidParameter("rook graph needs m >= 2".into()));
    }
    let mut edges = Vec::new();
    for r in 0..m {
        for c in 0..m {
            let v = r * m + c;
            for c2 in c + 1..m {
                edges.push((v, r * m + c2));
            }
            for r2 in r + 1..m {
                edges.push((v, r2 * m + c));
            }
        }
    }
    Ok(Graph::from_edges(m * m, edges)?.with_family(Family::Rook { m }))
}

/// Latin square graph of the cyclic square `(r + c) mod m`: cells adjacent
/// when they share a row, column, or symbol. Degree 3(m-1).
pub fn build_latin_square(m: usize) -> Result<Graph> {
    if m < 3 {
        return Err(Error::InvalidParameter(
            "latin square graph needs m >= 3".into(),
        ));
    }
    let mut edges = Vec::new();
    for r in 0..m {
        for c in 0..m {
            let v = r * m + c;
            for r2 in r + 1..m {
                for c2 in 0..m {
                    let u = r2 * m + c2;
                    if c2 == c || (r2 + c2) % m == (r + c) % m {
                        edges.push((v, u));
                    }
                }
            }
            for c2 in c + 1..m {
                edges.push((v, r * m + c2));
            }
        }
    }
    Ok(Graph::from_edges(m * m, edges)?.with_family(Family::LatinSquare { m }))
}

/// d-dimensional hypercube: bit strings adjacent at Hamming distance 1.
pub fn build_hypercube(d: usize) -> Result<Graph> {
    if d == 0 {
        return Err(Error::InvalidParameter("hypercube needs d >= 1".into()));
    }
    if d > 20 {
        return Err(Error::InvalidParameter(format!(
            "hypercube d={d} is too large"
        )));
    }
    let n = 1usize << d;
    let edges = (0..n).flat_map(|u| {
        (0..d)
            .filter(move |b| u & (1 << b) == 0)
            .map(move |b| (u, u | (1 << b)))
    });
    Ok(Graph::from_edges(n, edges)?.with_family(Family::Hypercube { d }))
}

/// Periodic d-dimensional cubic lattice (torus) with `side^d` vertices.
/// `side >= 3` so wraparound never duplicates an edge.
pub fn build_cubic_lattice(d: usize, side: usize) -> Result<Graph> {
    if d == 0 {
        return Err(Error::InvalidParameter("cubic lattice needs d >= 1".into()));
    }
    if side < 3 {
        return Err(Error::InvalidParameter(
            "cubic lattice needs side >= 3 (wraparound would duplicate edges)".into(),
        ));
    }
    let n = side
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("cubic lattice {side}^{d} overflows")))?;
    let mut edges = Vec::with_capacity(d * n);
    let mut stride = 1;
    for _ in 0..d {
        for v in 0..n {
            let coord = (v / stride) % side;
            // successor along this axis with wraparound
            let next = if coord + 1 == side {
                v - stride * (side - 1)
            } else {
                v + stride
            };
            edges.push((v, next));
        }
        stride *= side;
    }
    Ok(Graph::from_edges(n, edges)?.with_family(Family::Cubic { d, side }))
}

/// Two complete graphs on N/2 vertices joined by a single bridge edge
/// between vertices N/2 - 1 and N/2.
pub fn build_joined_complete(n: usize) -> Result<Graph> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "joined complete graph needs even N >= 6".into(),
        ));
    }
    let h = n / 2;
    let mut edges = Vec::new();
    for off in [0, h] {
        for u in 0..h {
            for v in u + 1..h {
                edges.push((off + u, off + v));
            }
        }
    }
    edges.push((h - 1, h));
    Ok(Graph::from_edges(n, edges)?.with_family(Family::JoinedComplete { n }))
}

/// M+1 complete graphs of M vertices arranged as an M-simplex: one edge per
/// clique pair, each vertex carrying exactly one inter-clique edge.
pub fn build_simplex_complete(m: usize) -> Result<Graph> {
    if m < 3 {
        return Err(Error::InvalidParameter(
            "simplex of complete graphs needs M >= 3".into(),
        ));
    }
    let n = m * (m + 1);
    let mut edges = Vec::new();
    for clique in 0..=m {
        let base = clique * m;
        for u in 0..m {
            for v in u + 1..m {
                edges.push((base + u, base + v));
            }
        }
    }
    // Vertex v of clique i pairs with clique j (the v-th other clique in
    // ascending order) at the reciprocal position there; adding each pair
    // once at i < j covers all C(M+1, 2) inter-clique edges.
    for i in 0..=m {
        for v in 0..m {
            let j = if v < i { v } else { v + 1 };
            if i < j {
                let w = i; // position of i in {0..=m} \ {j}, and i < j here
                edges.push((i * m + v, j * m + w));
            }
        }
    }
    Ok(Graph::from_edges(n, edges)?.with_family(Family::SimplexComplete { m }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn common_neighbors(g: &Graph, u: usize, v: usize) -> usize {
        (0..g.n())
            .filter(|&w| w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w))
            .count()
    }

    /// Brute-force strong regularity check: every adjacent pair has lambda
    /// common neighbors, every non-adjacent pair mu.
    fn assert_srg(g: &Graph, k: usize, lambda: usize, mu: usize) {
        for v in 0..g.n() {
            assert_eq!(g.degree(v), k, "degree of {v}");
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let c = common_neighbors(g, u, v);
                if g.has_edge(u, v) {
                    assert_eq!(c, lambda, "lambda at ({u},{v})");
                } else {
                    assert_eq!(c, mu, "mu at ({u},{v})");
                }
            }
        }
    }

    #[test]
    fn complete_small() {
        let g = build_complete(2).unwrap();
        assert_eq!(g.edges(), &[(0, 1)]);
        assert_eq!(g.degrees(), vec![1, 1]);

        let g1 = build_complete(1).unwrap();
        assert_eq!(g1.n(), 1);
        assert!(g1.edges().is_empty());

        let g6 = build_complete(6).unwrap();
        assert_eq!(g6.edges().len(), 15);
        assert!(g6.degrees().iter().all(|&d| d == 5));

        assert!(build_complete(0).is_err());
    }

    #[test]
    fn paley_five_is_a_cycle() {
        // Quadratic residues mod 5 are {1, 4}, so i ~ j iff |i - j| = 1 mod 5.
        let g = build_paley(5).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);
        assert!(g.degrees().iter().all(|&d| d == 2));
    }

    #[test]
    fn paley_thirteen_strongly_regular() {
        let g = build_paley(13).unwrap();
        assert_srg(&g, 6, 2, 3);
    }

    #[test]
    fn paley_rejects_bad_moduli() {
        assert!(build_paley(9).is_err()); // not prime
        assert!(build_paley(7).is_err()); // 3 mod 4
        assert!(build_paley(0).is_err());
    }

    #[test]
    fn rook_parameters() {
        let g = build_rook(3).unwrap();
        assert_srg(&g, 4, 1, 2);

        let g2 = build_rook(2).unwrap();
        assert_eq!(g2.edges().len(), 4);
        assert!(g2.degrees().iter().all(|&d| d == 2));

        let g4 = build_rook(4).unwrap();
        assert_eq!(g4.n(), 16);
        assert!(g4.degrees().iter().all(|&d| d == 6));
        assert_srg(&g4, 6, 2, 2);

        assert!(build_rook(1).is_err());
    }

    #[test]
    fn latin_square_parameters() {
        let g3 = build_latin_square(3).unwrap();
        assert!(g3.degrees().iter().all(|&d| d == 6));

        let g4 = build_latin_square(4).unwrap();
        assert_eq!(g4.n(), 16);
        assert!(g4.degrees().iter().all(|&d| d == 9));
        assert_srg(&g4, 9, 4, 6);

        let g5 = build_latin_square(5).unwrap();
        assert_srg(&g5, 12, 5, 6);

        assert!(build_latin_square(2).is_err());
    }

    #[test]
    fn hypercube_shapes() {
        let g1 = build_hypercube(1).unwrap();
        assert_eq!(g1.edges(), &[(0, 1)]);

        let g3 = build_hypercube(3).unwrap();
        assert_eq!(g3.edges().len(), 12);

        let g4 = build_hypercube(4).unwrap();
        assert_eq!(g4.n(), 16);
        assert!(g4.degrees().iter().all(|&d| d == 4));

        assert!(build_hypercube(0).is_err());
    }

    #[test]
    fn cubic_lattice_shapes() {
        let ring = build_cubic_lattice(1, 5).unwrap();
        assert_eq!(ring.edges(), &[(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]);

        let g2 = build_cubic_lattice(2, 8).unwrap();
        assert_eq!(g2.n(), 64);
        assert!(g2.degrees().iter().all(|&d| d == 4));

        let g3 = build_cubic_lattice(3, 4).unwrap();
        assert!(g3.degrees().iter().all(|&d| d == 6));
        assert_eq!(g3.edges().len(), 192);

        assert!(build_cubic_lattice(2, 2).is_err());
        assert!(build_cubic_lattice(0, 5).is_err());
    }

    #[test]
    fn joined_complete_shape() {
        let g = build_joined_complete(12).unwrap();
        assert_eq!(g.edges().len(), 31);
        let mut degs = g.degrees();
        degs.sort_unstable();
        assert_eq!(&degs[..10], &[5; 10]);
        assert_eq!(&degs[10..], &[6, 6]);
        // the two degree-6 vertices are the bridge endpoints
        assert_eq!(g.degree(5), 6);
        assert_eq!(g.degree(6), 6);
        assert!(g.has_edge(5, 6));

        let g6 = build_joined_complete(6).unwrap();
        assert_eq!(g6.edges().len(), 7);

        assert!(build_joined_complete(11).is_err());
        assert!(build_joined_complete(4).is_err());
    }

    #[test]
    fn simplex_complete_shape() {
        let g = build_simplex_complete(5).unwrap();
        assert_eq!(g.n(), 30);
        assert!(g.degrees().iter().all(|&d| d == 5));
        assert_eq!(g.edges().len(), 75);

        let g3 = build_simplex_complete(3).unwrap();
        assert_eq!(g3.n(), 12);
        assert!(g3.degrees().iter().all(|&d| d == 3));

        assert!(build_simplex_complete(2).is_err());
    }

    #[test]
    fn simplex_pairing_is_a_perfect_matching_over_clique_pairs() {
        let m = 5;
        let g = build_simplex_complete(m).unwrap();
        let clique_of = |v: usize| v / m;
        let mut pair_count = std::collections::HashMap::new();
        let mut inter_per_vertex = vec![0usize; g.n()];
        for &(u, v) in g.edges() {
            let (ci, cj) = (clique_of(u), clique_of(v));
            if ci != cj {
                *pair_count.entry((ci.min(cj), ci.max(cj))).or_insert(0) += 1;
                inter_per_vertex[u] += 1;
                inter_per_vertex[v] += 1;
            }
        }
        assert_eq!(pair_count.len(), (m + 1) * m / 2);
        assert!(pair_count.values().all(|&c| c == 1));
        assert!(inter_per_vertex.iter().all(|&c| c == 1));
    }

    #[test]
    fn builders_produce_connected_simple_graphs() {
        let graphs = [
            build_complete(6).unwrap(),
            build_paley(13).unwrap(),
            build_rook(3).unwrap(),
            build_latin_square(4).unwrap(),
            build_hypercube(4).unwrap(),
            build_cubic_lattice(2, 4).unwrap(),
            build_joined_complete(8).unwrap(),
            build_simplex_complete(4).unwrap(),
        ];
        for g in &graphs {
            assert!(g.is_connected(), "{:?} disconnected", g.family());
            let a = g.adjacency_matrix();
            for i in 0..g.n() {
                assert_eq!(a[(i, i)], 0.0);
                for j in 0..g.n() {
                    assert_eq!(a[(i, j)], a[(j, i)]);
                }
            }
        }
    }

    #[test]
    fn normalized_laplacian_rejects_isolated_vertices() {
        let k1 = build_complete(1).unwrap();
        assert!(matches!(
            k1.normalized_laplacian(),
            Err(Error::IsolatedVertex(0))
        ));
        assert!(k1.matrices().is_err());
        assert!(build_complete(2).unwrap().matrices().is_ok());
    }

    #[test]
    fn laplacian_of_k2() {
        let g = build_complete(2).unwrap();
        let l = g.laplacian();
        assert_eq!(l[(0, 0)], 1.0);
        assert_eq!(l[(0, 1)], -1.0);
        assert_eq!(l[(1, 0)], -1.0);
        assert_eq!(l[(1, 1)], 1.0);
    }

    #[test]
    fn laplacian_row_sums_vanish() {
        for g in [
            build_complete(6).unwrap(),
            build_joined_complete(10).unwrap(),
            build_simplex_complete(4).unwrap(),
        ] {
            let l = g.laplacian();
            for i in 0..g.n() {
                let row_sum: f64 = (0..g.n()).map(|j| l[(i, j)]).sum();
                assert!(row_sum.abs() < 1e-12, "row {i} sums to {row_sum}");
            }
        }
    }

    #[test]
    fn regular_graph_normalized_laplacian_is_scaled() {
        for g in [
            build_hypercube(3).unwrap(),
            build_complete(7).unwrap(),
            build_paley(13).unwrap(),
            build_rook(3).unwrap(),
            build_latin_square(4).unwrap(),
            build_cubic_lattice(2, 4).unwrap(),
            build_simplex_complete(4).unwrap(),
        ] {
            let k = g.degree(0) as f64;
            let l = g.laplacian();
            let nl = g.normalized_laplacian().unwrap();
            for i in 0..g.n() {
                for j in 0..g.n() {
                    assert!(
                        (nl[(i, j)] - l[(i, j)] / k).abs() < 1e-12,
                        "{:?} at ({i},{j})",
                        g.family()
                    );
                }
            }
        }
    }

    #[test]
    fn laplacian_ground_eigenvalue_is_zero_for_every_builder() {
        for g in [
            build_complete(6).unwrap(),
            build_paley(13).unwrap(),
            build_rook(3).unwrap(),
            build_latin_square(4).unwrap(),
            build_hypercube(4).unwrap(),
            build_cubic_lattice(2, 4).unwrap(),
            build_joined_complete(10).unwrap(),
            build_simplex_complete(4).unwrap(),
        ] {
            let eig = crate::spectral::hermitian_eig(&g.laplacian()).unwrap();
            assert!(
                eig.eigenvalues()[0].abs() <= 1e-10,
                "{:?}: lambda_0 = {}",
                g.family(),
                eig.eigenvalues()[0]
            );
        }
    }

    #[test]
    fn family_spec_round_trip() {
        for s in [
            "complete:n=6",
            "paley:q=13",
            "rook:m=3",
            "latin_square:m=5",
            "hypercube:d=4",
            "cubic:d=2,side=8",
            "joined_complete:N=1024",
            "simplex_complete:M=100",
        ] {
            let f = Family::parse(s).unwrap();
            assert_eq!(f.to_string(), s);
            assert_eq!(Family::parse(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn family_spec_errors() {
        assert!(matches!(
            Family::parse("tesseract:d=4"),
            Err(Error::Parse { pos: 0, .. })
        ));
        assert!(Family::parse("complete").is_err()); // missing key
        assert!(Family::parse("complete:n=6,m=2").is_err()); // extra key
        assert!(Family::parse("complete:n=six").is_err()); // non-integer
        assert!(Family::parse("cubic:d=2").is_err()); // missing side
    }

    #[test]
    fn graph_json_round_trip() {
        let g = build_joined_complete(12).unwrap();
        let s = g.to_json();
        let g2 = Graph::from_json(&s).unwrap();
        assert_eq!(g.n(), g2.n());
        assert_eq!(g.edges(), g2.edges());
        assert_eq!(g.family(), g2.family());
    }

    #[test]
    fn edge_list_round_trip() {
        let g = build_simplex_complete(3).unwrap();
        let text = g.to_edge_list();
        let g2 = Graph::from_edge_list(&text).unwrap();
        assert_eq!(g.n(), g2.n());
        assert_eq!(g.edges(), g2.edges());
    }
}
