//! Symmetric eigendecomposition and equitable-partition reduction.
//!
//! All Hamiltonians in this crate are real symmetric, so the Hermitian
//! eigenproblem reduces to the real symmetric one with real eigenvectors.
//! The equitable partition relative to a marked vertex spans an invariant
//! subspace of the search Hamiltonian; projecting onto the normalized cell
//! indicators gives an exact low-dimensional model of the dynamics.

use nalgebra::{Complex, DMatrix, DVector};

use crate::dynamics::HamiltonianMode;
use crate::error::{Error, Result};
use crate::graph::Graph;

pub type C64 = Complex<f64>;

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<f64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V diag(E) V^T.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&DVector::from_row_slice(&self.eigenvalues));
        &self.eigenvectors * d * self.eigenvectors.transpose()
    }

    /// Max-norm reconstruction error against the original matrix, relative
    /// to max(1, max |H|).
    pub fn reconstruction_error(&self, h: &DMatrix<f64>) -> f64 {
        let scale = h.amax().max(1.0);
        (self.reconstruct() - h).amax() / scale
    }

    /// Max-norm deviation of V^T V from the identity.
    pub fn orthonormality_error(&self) -> f64 {
        let n = self.dim();
        (self.eigenvectors.transpose() * &self.eigenvectors - DMatrix::<f64>::identity(n, n)).amax()
    }
}

/// Eigendecomposition of a real symmetric matrix, eigenvalues ascending.
///
/// Rejects matrices that are not symmetric to within `1e-12` relative to
/// their largest entry.
pub fn hermitian_eig(h: &DMatrix<f64>) -> Result<SpectralDecomposition> {
    if h.nrows() != h.ncols() {
        return Err(Error::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let tol = 1e-12 * h.amax().max(1.0);
    for i in 0..h.nrows() {
        for j in i + 1..h.ncols() {
            let delta = (h[(i, j)] - h[(j, i)]).abs();
            if delta > tol {
                return Err(Error::NotSymmetric { i, j, delta });
            }
        }
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = eigenvalues.len();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// Ordered vertex partition; cell 0 holds the marked vertex alone.
///
/// Cells are ordered by (graph distance from the marked vertex, smallest
/// member index) and labeled `a`, `b`, `c`, ... in that order, which
/// matches the basis-ket ordering used for the reduced Hamiltonians.
#[derive(Clone, Debug)]
pub struct Partition {
    cells: Vec<Vec<usize>>,
    cell_of: Vec<usize>,
    labels: Vec<String>,
}

impl Partition {
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn cell_of(&self, v: usize) -> usize {
        self.cell_of[v]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, cell: usize) -> &str {
        &self.labels[cell]
    }

    pub fn cell_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Exact integer equitability check: within every cell, all vertices
    /// have the same number of neighbors in every cell.
    pub fn is_equitable(&self, g: &Graph) -> bool {
        self.neighbor_counts(g).is_ok()
    }

    /// The quotient counts `b[i][j]`: neighbors in cell j of any vertex in
    /// cell i. Errors if the partition is not equitable.
    pub fn neighbor_counts(&self, g: &Graph) -> Result<Vec<Vec<usize>>> {
        let c = self.num_cells();
        let mut counts = vec![vec![0usize; c]; c];
        for (i, cell) in self.cells.iter().enumerate() {
            let mut first = true;
            for &v in cell {
                let mut row = vec![0usize; c];
                for &u in g.neighbors(v) {
                    row[self.cell_of[u]] += 1;
                }
                if first {
                    counts[i] = row;
                    first = false;
                } else if counts[i] != row {
                    return Err(Error::InvalidParameter(format!(
                        "partition not equitable at cell {i}, vertex {v}"
                    )));
                }
            }
        }
        Ok(counts)
    }
}

/// Coarsest equitable partition refining {marked} | {rest}.
pub fn equitable_partition(g: &Graph, marked: usize) -> Result<Partition> {
    let n = g.n();
    if marked >= n {
        return Err(Error::VertexOutOfRange { vertex: marked, n });
    }
    let mut cell_of = vec![1usize; n];
    cell_of[marked] = 0;
    let mut num_cells = if n > 1 { 2 } else { 1 };

    loop {
        // signature of v = neighbor counts per current cell
        let mut sigs: Vec<Vec<usize>> = vec![vec![0; num_cells]; n];
        for (v, sig) in sigs.iter_mut().enumerate() {
            for &u in g.neighbors(v) {
                sig[cell_of[u]] += 1;
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); num_cells];
        for v in 0..n {
            members[cell_of[v]].push(v);
        }
        let mut next_cell_of = vec![0usize; n];
        let mut next_num = 0usize;
        let mut split = false;
        for cell in &members {
            let mut groups: Vec<(&Vec<usize>, Vec<usize>)> = Vec::new();
            for &v in cell {
                match groups.iter_mut().find(|(sig, _)| **sig == sigs[v]) {
                    Some((_, vs)) => vs.push(v),
                    None => groups.push((&sigs[v], vec![v])),
                }
            }
            groups.sort_by(|a, b| a.0.cmp(b.0));
            if groups.len() > 1 {
                split = true;
            }
            for (_, vs) in groups {
                for v in vs {
                    next_cell_of[v] = next_num;
                }
                next_num += 1;
            }
        }
        cell_of = next_cell_of;
        num_cells = next_num;
        if !split {
            break;
        }
    }

    // Canonical order: distance from the marked vertex (constant on each
    // cell of an equitable partition isolating it), then smallest member.
    let dist = g.bfs_distances(marked);
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); num_cells];
    for v in 0..n {
        cells[cell_of[v]].push(v);
    }
    cells.sort_by_key(|cell| (dist[cell[0]], cell[0]));
    let mut final_cell_of = vec![0usize; n];
    for (i, cell) in cells.iter().enumerate() {
        for &v in cell {
            final_cell_of[v] = i;
        }
    }
    let labels = (0..num_cells).map(cell_label).collect();
    Ok(Partition {
        cells,
        cell_of: final_cell_of,
        labels,
    })
}

fn cell_label(i: usize) -> String {
    if i < 26 {
        char::from(b'a' + i as u8).to_string()
    } else {
        format!("cell{i}")
    }
}

/// The invariant subspace spanned by normalized cell indicators, with the
/// quotient adjacency and Laplacian acting on it.
#[derive(Clone, Debug)]
pub struct ReducedSpace {
    partition: Partition,
    sizes: Vec<usize>,
    n_full: usize,
    marked: usize,
    adjacency: DMatrix<f64>,
    laplacian: DMatrix<f64>,
}

impl ReducedSpace {
    pub fn new(g: &Graph, marked: usize) -> Result<ReducedSpace> {
        let partition = equitable_partition(g, marked)?;
        let counts = partition.neighbor_counts(g)?;
        let c = partition.num_cells();
        let sizes = partition.sizes();
        // b_ij * sqrt(s_i / s_j) = sqrt(b_ij * b_ji), exactly symmetric
        let adjacency =
            DMatrix::from_fn(c, c, |i, j| ((counts[i][j] * counts[j][i]) as f64).sqrt());
        let degrees: Vec<f64> = counts
            .iter()
            .map(|row| row.iter().sum::<usize>() as f64)
            .collect();
        let mut laplacian = -&adjacency;
        for i in 0..c {
            laplacian[(i, i)] += degrees[i];
        }
        Ok(ReducedSpace {
            partition,
            sizes,
            n_full: g.n(),
            marked,
            adjacency,
            laplacian,
        })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn num_cells(&self) -> usize {
        self.sizes.len()
    }

    pub fn n_full(&self) -> usize {
        self.n_full
    }

    pub fn marked(&self) -> usize {
        self.marked
    }

    /// Quotient of the adjacency matrix on the cell basis.
    pub fn quotient_adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }

    /// Quotient of the graph Laplacian on the cell basis.
    pub fn quotient_laplacian(&self) -> &DMatrix<f64> {
        &self.laplacian
    }

    /// Reduced search Hamiltonian at jumping rate `gamma`. The marked-vertex
    /// projector becomes the (0,0) entry because cell 0 = {marked}.
    pub fn hamiltonian(&self, gamma: f64, mode: HamiltonianMode) -> DMatrix<f64> {
        let mut h = match mode {
            HamiltonianMode::Laplacian => gamma * &self.laplacian,
            HamiltonianMode::Adjacency => -gamma * &self.adjacency,
        };
        h[(0, 0)] -= 1.0;
        h
    }

    /// Project a full-space state onto the cell basis.
    pub fn project(&self, full: &DVector<C64>) -> DVector<C64> {
        let mut red = DVector::from_element(self.num_cells(), C64::new(0.0, 0.0));
        for (v, &cell) in self.partition.cell_of.iter().enumerate() {
            red[cell] += full[v];
        }
        for (cell, &s) in self.sizes.iter().enumerate() {
            red[cell] /= (s as f64).sqrt();
        }
        red
    }

    /// Lift a cell-basis state back to the full space.
    pub fn lift(&self, reduced: &DVector<C64>) -> DVector<C64> {
        DVector::from_iterator(
            self.n_full,
            (0..self.n_full).map(|v| {
                let cell = self.partition.cell_of[v];
                reduced[cell] / (self.sizes[cell] as f64).sqrt()
            }),
        )
    }

    /// The uniform superposition in the cell basis: sqrt(s_c / N).
    pub fn uniform_reduced(&self) -> DVector<C64> {
        let n = self.n_full as f64;
        DVector::from_iterator(
            self.num_cells(),
            self.sizes
                .iter()
                .map(|&s| C64::new((s as f64 / n).sqrt(), 0.0)),
        )
    }

    /// Basis vector of a single cell in the cell basis.
    pub fn cell_state(&self, cell: usize) -> DVector<C64> {
        let mut v = DVector::from_element(self.num_cells(), C64::new(0.0, 0.0));
        v[cell] = C64::new(1.0, 0.0);
        v
    }
}

/// Reduced system at a fixed jumping rate: the equitable-partition subspace
/// together with the reduced search Hamiltonian.
#[derive(Clone, Debug)]
pub struct ReducedSystem {
    pub space: ReducedSpace,
    pub gamma: f64,
    pub mode: HamiltonianMode,
    pub hamiltonian: DMatrix<f64>,
}

/// Reduce the exact search Hamiltonian to the equitable-partition subspace.
pub fn reduce(
    g: &Graph,
    marked: usize,
    gamma: f64,
    mode: HamiltonianMode,
) -> Result<ReducedSystem> {
    let space = ReducedSpace::new(g, marked)?;
    let hamiltonian = space.hamiltonian(gamma, mode);
    Ok(ReducedSystem {
        space,
        gamma,
        mode,
        hamiltonian,
    })
}

/// Apply the full-space search Hamiltonian to a real vector without
/// materializing the matrix.
fn apply_search_hamiltonian(
    g: &Graph,
    marked: usize,
    gamma: f64,
    mode: HamiltonianMode,
    x: &DVector<f64>,
) -> DVector<f64> {
    let n = g.n();
    let mut y = DVector::zeros(n);
    for v in 0..n {
        let mut acc = 0.0;
        for &u in g.neighbors(v) {
            acc += x[u];
        }
        y[v] = match mode {
            HamiltonianMode::Laplacian => gamma * (g.degree(v) as f64 * x[v] - acc),
            HamiltonianMode::Adjacency => -gamma * acc,
        };
    }
    y[marked] -= x[marked];
    y
}

/// Max-norm residual of H restricted to the cell-indicator span:
/// || (1 - P P^T) H P ||_max. Zero (to rounding) because the equitable
/// partition spans an invariant subspace.
pub fn subspace_residual(
    g: &Graph,
    marked: usize,
    gamma: f64,
    mode: HamiltonianMode,
) -> Result<f64> {
    let rs = ReducedSpace::new(g, marked)?;
    let mut worst: f64 = 0.0;
    for j in 0..rs.num_cells() {
        let mut p = DVector::zeros(g.n());
        let s = (rs.sizes[j] as f64).sqrt();
        for &v in &rs.partition.cells()[j] {
            p[v] = 1.0 / s;
        }
        let h = apply_search_hamiltonian(g, marked, gamma, mode, &p);
        // subtract the in-subspace component
        let mut coeffs = vec![0.0; rs.num_cells()];
        for (v, &cell) in rs.partition.cell_of.iter().enumerate() {
            coeffs[cell] += h[v];
        }
        for (cell, c) in coeffs.iter_mut().enumerate() {
            *c /= (rs.sizes[cell] as f64).sqrt();
        }
        for v in 0..g.n() {
            let cell = rs.partition.cell_of[v];
            let residual = h[v] - coeffs[cell] / (rs.sizes[cell] as f64).sqrt();
            worst = worst.max(residual.abs());
        }
    }
    Ok(worst)
}
