//! Search Hamiltonians and Schrödinger evolution.
//!
//! Evolution is computed through the spectral decomposition, so each
//! piecewise-constant stage of a jumping-rate schedule is propagated
//! exactly: psi(t) = sum_k exp(-i E_k t) |psi_k><psi_k|psi(0)>.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::{self, ReducedSpace, SpectralDecomposition, C64};

/// Which graph operator the jumping rate multiplies.
///
/// `Laplacian` is exact for any graph; `Adjacency` drops the degree term
/// and matches the Laplacian dynamics up to a global phase only for
/// regular graphs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianMode {
    Laplacian,
    Adjacency,
}

impl FromStr for HamiltonianMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<HamiltonianMode> {
        match s {
            "laplacian" => Ok(HamiltonianMode::Laplacian),
            "adjacency" => Ok(HamiltonianMode::Adjacency),
            other => Err(Error::InvalidParameter(format!(
                "unknown mode {other:?}, expected laplacian or adjacency"
            ))),
        }
    }
}

impl fmt::Display for HamiltonianMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HamiltonianMode::Laplacian => write!(f, "laplacian"),
            HamiltonianMode::Adjacency => write!(f, "adjacency"),
        }
    }
}

/// A search instance: graph, marked vertex, jumping rate, and mode.
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub graph: Graph,
    pub marked: usize,
    pub gamma: f64,
    pub mode: HamiltonianMode,
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.marked >= self.graph.n() {
            return Err(Error::VertexOutOfRange {
                vertex: self.marked,
                n: self.graph.n(),
            });
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "jumping rate must be finite and positive, got {}",
                self.gamma
            )));
        }
        Ok(())
    }
}

/// Equal superposition over `n` vertices.
pub fn uniform_state(n: usize) -> Result<DVector<C64>> {
    if n == 0 {
        return Err(Error::InvalidParameter("state needs n >= 1".into()));
    }
    let amp = 1.0 / (n as f64).sqrt();
    Ok(DVector::from_element(n, C64::new(amp, 0.0)))
}

/// Basis state of a single vertex.
pub fn basis_state(n: usize, v: usize) -> Result<DVector<C64>> {
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    let mut psi = DVector::from_element(n, C64::new(0.0, 0.0));
    psi[v] = C64::new(1.0, 0.0);
    Ok(psi)
}

/// Full-space search Hamiltonian: `gamma L - |a><a|` in Laplacian mode,
/// `-gamma A - |a><a|` in adjacency mode.
pub fn search_hamiltonian(cfg: &SearchConfig) -> Result<DMatrix<f64>> {
    cfg.validate()?;
    let mut h = match cfg.mode {
        HamiltonianMode::Laplacian => cfg.gamma * cfg.graph.laplacian(),
        HamiltonianMode::Adjacency => -cfg.gamma * cfg.graph.adjacency_matrix(),
    };
    h[(cfg.marked, cfg.marked)] -= 1.0;
    Ok(h)
}

fn real_mul_complex(m: &DMatrix<f64>, x: &DVector<C64>) -> DVector<C64> {
    let re: DVector<f64> = x.map(|z| z.re);
    let im: DVector<f64> = x.map(|z| z.im);
    let yr = m * re;
    let yi = m * im;
    DVector::from_iterator(
        m.nrows(),
        yr.iter().zip(yi.iter()).map(|(&r, &i)| C64::new(r, i)),
    )
}

fn real_tr_mul_complex(m: &DMatrix<f64>, x: &DVector<C64>) -> DVector<C64> {
    let re: DVector<f64> = x.map(|z| z.re);
    let im: DVector<f64> = x.map(|z| z.im);
    let yr = m.tr_mul(&re);
    let yi = m.tr_mul(&im);
    DVector::from_iterator(
        m.ncols(),
        yr.iter().zip(yi.iter()).map(|(&r, &i)| C64::new(r, i)),
    )
}

/// Exact propagator for a time-independent Hamiltonian.
pub struct Propagator {
    decomposition: SpectralDecomposition,
}

impl Propagator {
    pub fn new(h: &DMatrix<f64>) -> Result<Propagator> {
        Ok(Propagator {
            decomposition: spectral::hermitian_eig(h)?,
        })
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.decomposition
    }

    /// psi(t) = V exp(-i E t) V^T psi0.
    pub fn evolve(&self, psi0: &DVector<C64>, t: f64) -> DVector<C64> {
        let mut coeffs = real_tr_mul_complex(self.decomposition.eigenvectors(), psi0);
        for (k, &e) in self.decomposition.eigenvalues().iter().enumerate() {
            coeffs[k] *= C64::from_polar(1.0, -e * t);
        }
        real_mul_complex(self.decomposition.eigenvectors(), &coeffs)
    }
}

/// Evolve a normalized state under a time-independent Hamiltonian.
pub fn evolve(h: &DMatrix<f64>, psi0: &DVector<C64>, t: f64) -> Result<DVector<C64>> {
    let drift = (psi0.norm() - 1.0).abs();
    if drift > 1e-10 {
        return Err(Error::NotNormalized(drift));
    }
    if psi0.len() != h.nrows() {
        return Err(Error::DimensionMismatch {
            expected: h.nrows(),
            actual: psi0.len(),
        });
    }
    Ok(Propagator::new(h)?.evolve(psi0, t))
}

/// One stage of a piecewise-constant jumping-rate schedule.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    pub gamma: f64,
    pub duration: f64,
}

/// Ordered stages of (jumping rate, duration).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    stages: Vec<Stage>,
}

impl Schedule {
    pub fn new(stages: Vec<Stage>) -> Result<Schedule> {
        if stages.is_empty() {
            return Err(Error::EmptySchedule);
        }
        for (index, s) in stages.iter().enumerate() {
            if !s.duration.is_finite() || s.duration <= 0.0 {
                return Err(Error::InvalidStage {
                    index,
                    duration: s.duration,
                });
            }
            if !s.gamma.is_finite() || s.gamma <= 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "stage {index} has non-positive jumping rate {}",
                    s.gamma
                )));
            }
        }
        Ok(Schedule { stages })
    }

    pub fn single(gamma: f64, duration: f64) -> Result<Schedule> {
        Schedule::new(vec![Stage { gamma, duration }])
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    pub fn total_duration(&self) -> f64 {
        self.stages.iter().map(|s| s.duration).sum()
    }

    /// Parse `g1:t1,g2:t2,...`.
    pub fn parse(s: &str) -> Result<Schedule> {
        let mut stages = Vec::new();
        let mut pos = 0usize;
        for part in s.split(',') {
            let colon = part.find(':').ok_or(Error::Parse {
                pos,
                msg: format!("expected gamma:duration, got {part:?}"),
            })?;
            let gamma: f64 = part[..colon].trim().parse().map_err(|_| Error::Parse {
                pos,
                msg: format!("invalid jumping rate {:?}", &part[..colon]),
            })?;
            let duration: f64 = part[colon + 1..].trim().parse().map_err(|_| Error::Parse {
                pos: pos + colon + 1,
                msg: format!("invalid duration {:?}", &part[colon + 1..]),
            })?;
            stages.push(Stage { gamma, duration });
            pos += part.len() + 1;
        }
        Schedule::new(stages)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .stages
            .iter()
            .map(|s| format!("{}:{}", s.gamma, s.duration))
            .collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Sampled observable probabilities over time.
#[derive(Clone, Debug, Serialize)]
pub struct TimeSeries {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// `samples[i][k]` = probability of observable k at `times[i]`
    pub samples: Vec<Vec<f64>>,
    /// state norm at each sample time
    pub norms: Vec<f64>,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norms
            .iter()
            .map(|&n| (n - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Values of one observable across all samples.
    pub fn column(&self, observable: usize) -> Vec<f64> {
        self.samples.iter().map(|row| row[observable]).collect()
    }

    /// Sample closest to time `t`.
    pub fn nearest(&self, t: f64) -> usize {
        let mut best = 0;
        let mut dist = f64::INFINITY;
        for (i, &ti) in self.times.iter().enumerate() {
            let d = (ti - t).abs();
            if d < dist {
                dist = d;
                best = i;
            }
        }
        best
    }
}

fn schedule_sampler(
    dim: usize,
    psi0: DVector<C64>,
    schedule: &Schedule,
    dt: f64,
    mut hamiltonian_for: impl FnMut(f64) -> Result<DMatrix<f64>>,
    measure: impl Fn(&DVector<C64>) -> Vec<f64>,
    labels: Vec<String>,
) -> Result<TimeSeries> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sample step must be positive, got {dt}"
        )));
    }
    debug_assert_eq!(psi0.len(), dim);
    let mut times = vec![0.0];
    let mut samples = vec![measure(&psi0)];
    let mut norms = vec![psi0.norm()];

    let mut psi = psi0;
    let mut t_start = 0.0;
    let eps = dt * 1e-9;
    for stage in schedule.stages() {
        let prop = Propagator::new(&hamiltonian_for(stage.gamma)?)?;
        let t_end = t_start + stage.duration;
        // samples at global multiples of dt inside this stage, then the boundary
        let mut k = (t_start / dt).floor() as u64 + 1;
        loop {
            let t = k as f64 * dt;
            if t >= t_end - eps {
                break;
            }
            if t > t_start + eps {
                let state = prop.evolve(&psi, t - t_start);
                times.push(t);
                samples.push(measure(&state));
                norms.push(state.norm());
            }
            k += 1;
        }
        psi = prop.evolve(&psi, stage.duration);
        times.push(t_end);
        samples.push(measure(&psi));
        norms.push(psi.norm());
        t_start = t_end;
    }
    Ok(TimeSeries {
        times,
        labels,
        samples,
        norms,
    })
}

fn observable_labels(space: &ReducedSpace, observables: &[usize]) -> Result<Vec<String>> {
    observables
        .iter()
        .map(|&c| {
            if c >= space.num_cells() {
                Err(Error::InvalidParameter(format!(
                    "observable cell {c} out of range ({} cells)",
                    space.num_cells()
                )))
            } else {
                Ok(space.partition().label(c).to_string())
            }
        })
        .collect()
}

/// Run a jumping-rate schedule in the full vertex space, starting from the
/// equal superposition. Observables are cells of the equitable partition
/// relative to `cfg.marked`.
pub fn run_schedule(
    cfg: &SearchConfig,
    schedule: &Schedule,
    dt: f64,
    observables: &[usize],
) -> Result<TimeSeries> {
    cfg.validate()?;
    let space = ReducedSpace::new(&cfg.graph, cfg.marked)?;
    let labels = observable_labels(&space, observables)?;
    let cells: Vec<Vec<usize>> = observables
        .iter()
        .map(|&c| space.partition().cells()[c].clone())
        .collect();
    let psi0 = uniform_state(cfg.graph.n())?;
    let graph = cfg.graph.clone();
    let marked = cfg.marked;
    let mode = cfg.mode;
    schedule_sampler(
        graph.n(),
        psi0,
        schedule,
        dt,
        move |gamma| {
            search_hamiltonian(&SearchConfig {
                graph: graph.clone(),
                marked,
                gamma,
                mode,
            })
        },
        move |psi| {
            cells
                .iter()
                .map(|cell| cell.iter().map(|&v| psi[v].norm_sqr()).sum())
                .collect()
        },
        labels,
    )
}

/// Run a schedule in the equitable-partition subspace. Exact for the same
/// dynamics because the subspace is invariant, but the state dimension is
/// the number of cells rather than the number of vertices.
pub fn run_schedule_reduced(
    cfg: &SearchConfig,
    schedule: &Schedule,
    dt: f64,
    observables: &[usize],
) -> Result<TimeSeries> {
    cfg.validate()?;
    let space = ReducedSpace::new(&cfg.graph, cfg.marked)?;
    let labels = observable_labels(&space, observables)?;
    let psi0 = space.uniform_reduced();
    let obs: Vec<usize> = observables.to_vec();
    let mode = cfg.mode;
    let dim = space.num_cells();
    let space2 = space.clone();
    schedule_sampler(
        dim,
        psi0,
        schedule,
        dt,
        move |gamma| Ok(space2.hamiltonian(gamma, mode)),
        move |psi| obs.iter().map(|&c| psi[c].norm_sqr()).collect(),
        labels,
    )
}

/// A probe state for overlap sweeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Probe {
    /// The equal superposition |s>.
    Uniform,
    /// The normalized indicator of one partition cell (0 = marked vertex).
    Cell(usize),
}

impl Probe {
    /// `s` is the uniform state; a single letter names a partition cell
    /// (`a` = marked, `b` = cell 1, ...).
    pub fn parse(s: &str) -> Result<Probe> {
        if s == "s" {
            return Ok(Probe::Uniform);
        }
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_lowercase() => Ok(Probe::Cell((c as u8 - b'a') as usize)),
            _ => Err(Error::InvalidParameter(format!(
                "unknown probe {s:?}; expected s or a cell letter"
            ))),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Probe::Uniform => "s".to_string(),
            Probe::Cell(c) => cell_name(*c),
        }
    }

    fn reduced_state(&self, space: &ReducedSpace) -> Result<DVector<C64>> {
        match *self {
            Probe::Uniform => Ok(space.uniform_reduced()),
            Probe::Cell(c) => {
                if c >= space.num_cells() {
                    Err(Error::InvalidParameter(format!(
                        "probe cell {c} out of range ({} cells)",
                        space.num_cells()
                    )))
                } else {
                    Ok(space.cell_state(c))
                }
            }
        }
    }
}

fn cell_name(c: usize) -> String {
    if c < 26 {
        char::from(b'a' + c as u8).to_string()
    } else {
        format!("cell{c}")
    }
}

/// Spectrum and squared probe overlaps at one jumping rate.
#[derive(Clone, Debug, Serialize)]
pub struct OverlapRow {
    pub gamma: f64,
    pub energies: Vec<f64>,
    /// `overlaps[p][k]` = |<probe p|psi_k>|^2
    pub overlaps: Vec<Vec<f64>>,
}

/// Eigenvalues and squared probe overlaps of the reduced search Hamiltonian
/// at a single jumping rate.
pub fn overlap_at(
    space: &ReducedSpace,
    gamma: f64,
    mode: HamiltonianMode,
    probes: &[Probe],
) -> Result<OverlapRow> {
    let h = space.hamiltonian(gamma, mode);
    let eig = spectral::hermitian_eig(&h)?;
    let states: Vec<DVector<C64>> = probes
        .iter()
        .map(|p| p.reduced_state(space))
        .collect::<Result<_>>()?;
    let overlaps = states
        .iter()
        .map(|state| {
            (0..eig.dim())
                .map(|k| {
                    let col = eig.eigenvectors().column(k);
                    let amp: C64 = col.iter().zip(state.iter()).map(|(&v, &z)| z * v).sum();
                    amp.norm_sqr()
                })
                .collect()
        })
        .collect();
    Ok(OverlapRow {
        gamma,
        energies: eig.eigenvalues().to_vec(),
        overlaps,
    })
}

/// Sweep the jumping rate and record the spectrum and probe overlaps at
/// each value. Computed in the equitable-partition subspace, which carries
/// every probe exactly.
pub fn overlap_spectrum(
    g: &Graph,
    marked: usize,
    mode: HamiltonianMode,
    gammas: &[f64],
    probes: &[Probe],
) -> Result<Vec<OverlapRow>> {
    let space = ReducedSpace::new(g, marked)?;
    gammas
        .iter()
        .map(|&gamma| overlap_at(&space, gamma, mode, probes))
        .collect()
}

/// Global maximum of one observable with parabolic refinement over the
/// three samples around it. Ties resolve to the earliest sample.
pub fn find_peak(ts: &TimeSeries, observable: usize) -> Result<(f64, f64)> {
    if ts.is_empty() {
        return Err(Error::InvalidParameter("empty time series".into()));
    }
    let values = ts.column(observable);
    let mut best = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    if best == 0 || best + 1 == values.len() {
        return Ok((ts.times[best], values[best]));
    }
    let (t0, t1, t2) = (ts.times[best - 1], ts.times[best], ts.times[best + 1]);
    let (p0, p1, p2) = (values[best - 1], values[best], values[best + 1]);
    let d1 = (p1 - p0) / (t1 - t0);
    let d2 = (p2 - p1) / (t2 - t1);
    let a = (d2 - d1) / (t2 - t0);
    if a >= 0.0 || a.abs() < f64::EPSILON {
        return Ok((t1, p1));
    }
    let t_star = 0.5 * (t0 + t1) - d1 / (2.0 * a);
    if t_star < t0 || t_star > t2 {
        return Ok((t1, p1));
    }
    let p_star = p0 + d1 * (t_star - t0) + a * (t_star - t0) * (t_star - t1);
    Ok((t_star, p_star))
}
