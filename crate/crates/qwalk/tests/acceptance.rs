//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p qwalk --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use std::f64::consts::PI;

use qwalk::connectivity::{self, connectivity_report};
use qwalk::dynamics::{
    self, find_peak, overlap_spectrum, HamiltonianMode, Probe, Schedule, SearchConfig, Stage,
};
use qwalk::graph::{self, Family};
use qwalk::oracle;
use qwalk::spectral;

/// Collects check failures so each criterion prints exactly one line.
struct Criterion {
    name: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(name: &'static str) -> Criterion {
        Criterion {
            name,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        if !ok {
            self.failures.push(detail);
        }
    }

    fn check_close(&mut self, got: f64, want: f64, tol: f64, what: &str) {
        self.check(
            (got - want).abs() <= tol,
            format!("{what}: got {got}, want {want} (tol {tol})"),
        );
    }

    fn finish(self) {
        if self.failures.is_empty() {
            println!("acceptance {}: PASS", self.name);
        } else {
            println!("acceptance {}: FAIL", self.name);
            for f in &self.failures {
                println!("  - {f}");
            }
            panic!(
                "acceptance {} failed: {}",
                self.name,
                self.failures.join("; ")
            );
        }
    }
}

#[test]
fn acceptance_01_table_ii_connectivities() {
    let mut c = Criterion::new("1 (Table II connectivity reproduction)");
    let sq13 = 13f64.sqrt();
    let cubic_alg = 2.0 * (1.0 - (2.0 * PI / 8.0).cos());
    // (family, degree min, degree max, vertex=edge, algebraic, normalized)
    type Row = (Family, usize, usize, usize, Option<f64>, Option<f64>);
    let rows: Vec<Row> = vec![
        (
            Family::Complete { n: 64 },
            63,
            63,
            63,
            Some(64.0),
            Some(64.0 / 63.0),
        ),
        (
            Family::Paley { q: 13 },
            6,
            6,
            6,
            Some((13.0 - sq13) / 2.0),
            Some((13.0 - sq13) / 12.0),
        ),
        (Family::Rook { m: 3 }, 4, 4, 4, Some(3.0), Some(0.75)),
        (
            Family::LatinSquare { m: 5 },
            12,
            12,
            12,
            Some(10.0),
            Some(10.0 / 12.0),
        ),
        (
            Family::Hypercube { d: 6 },
            6,
            6,
            6,
            Some(2.0),
            Some(2.0 / 6.0),
        ),
        (
            Family::Cubic { d: 2, side: 8 },
            4,
            4,
            4,
            Some(cubic_alg),
            Some(cubic_alg / 4.0),
        ),
        (Family::JoinedComplete { n: 64 }, 31, 32, 1, None, None),
        (
            Family::SimplexComplete { m: 8 },
            8,
            8,
            8,
            Some(1.0),
            Some(0.125),
        ),
    ];
    for (family, dmin, dmax, kappa, alg, norm) in rows {
        let g = family.build().unwrap();
        let r = connectivity_report(&g).unwrap();
        c.check(
            r.degree_min == dmin && r.degree_max == dmax,
            format!(
                "{family}: degrees {}..{} want {dmin}..{dmax}",
                r.degree_min, r.degree_max
            ),
        );
        c.check(
            r.vertex_connectivity == kappa,
            format!(
                "{family}: vertex connectivity {} want {kappa}",
                r.vertex_connectivity
            ),
        );
        c.check(
            r.edge_connectivity == kappa,
            format!(
                "{family}: edge connectivity {} want {kappa}",
                r.edge_connectivity
            ),
        );
        if let Some(alg) = alg {
            c.check_close(
                r.algebraic_connectivity,
                alg,
                1e-8,
                &format!("{family}: algebraic"),
            );
        }
        if let Some(norm) = norm {
            c.check_close(
                r.normalized_algebraic_connectivity,
                norm,
                1e-8,
                &format!("{family}: normalized algebraic"),
            );
        }
    }
    c.finish();
}

/// The joined-complete algebraic connectivity window asserted in the
/// acceptance criteria. The true second Laplacian eigenvalue of two
/// cliques joined by one edge is bounded by the cut vector (+1 on one
/// clique, -1 on the other): lambda_1 <= 4/N. Numerically lambda_1 is
/// about 3.8/N here, so the 0.1 < lambda_1 window cannot hold at N = 64
/// or 128 for any correct implementation; this check is kept as stated
/// and fails honestly.
#[test]
fn acceptance_01_joined_algebraic_theta1_window() {
    let mut c = Criterion::new("1 (joined-complete algebraic connectivity window)");
    for n in [32usize, 64, 128] {
        let g = graph::build_joined_complete(n).unwrap();
        let lam = connectivity::algebraic_connectivity(&g);
        c.check(
            0.1 < lam && lam < 10.0,
            format!("joined N={n}: lambda_1 = {lam} outside (0.1, 10)"),
        );
    }
    c.finish();
}

#[test]
fn acceptance_02_simplex_subspace_laplacian_spectrum() {
    let mut c = Criterion::new("2 (simplex subspace Laplacian spectrum)");
    for m in [5usize, 20, 100] {
        let g = graph::build_simplex_complete(m).unwrap();
        let rs = spectral::ReducedSpace::new(&g, 0).unwrap();
        let eig = spectral::hermitian_eig(rs.quotient_laplacian()).unwrap();
        let mf = m as f64;
        let expected = [0.0, 1.0, 1.0, mf, mf + 1.0, mf + 1.0, mf + 2.0];
        for (k, (&got, want)) in eig.eigenvalues().iter().zip(expected).enumerate() {
            c.check_close(got, want, 1e-8, &format!("M={m} eigenvalue {k}"));
        }
    }
    c.finish();
}

#[test]
fn acceptance_03_joined_peak_full_space() {
    let mut c = Criterion::new("3 (joined complete N=1024 peak)");
    let n = 1024usize;
    let gamma = 2.0 / n as f64;
    let cfg = SearchConfig {
        graph: graph::build_joined_complete(n).unwrap(),
        marked: 0,
        gamma,
        mode: HamiltonianMode::Adjacency,
    };
    let predicted = PI / 2.0 * (n as f64 / 2.0).sqrt();
    let schedule = Schedule::single(gamma, 1.4 * predicted).unwrap();
    let ts = dynamics::run_schedule(&cfg, &schedule, predicted / 1500.0, &[0]).unwrap();
    let (t_star, p_star) = find_peak(&ts, 0).unwrap();
    c.check(
        (0.45..=0.55).contains(&p_star),
        format!("peak probability {p_star} outside [0.45, 0.55]"),
    );
    c.check(
        (t_star - predicted).abs() <= 0.05 * predicted,
        format!("peak time {t_star} not within 5% of {predicted}"),
    );
    c.finish();
}

#[test]
fn acceptance_04_complete_peak_full_space() {
    let mut c = Criterion::new("4 (complete graph N=1024 peak)");
    let n = 1024usize;
    let gamma = 1.0 / n as f64;
    let cfg = SearchConfig {
        graph: graph::build_complete(n).unwrap(),
        marked: 0,
        gamma,
        mode: HamiltonianMode::Adjacency,
    };
    let predicted = PI * (n as f64).sqrt() / 2.0;
    let schedule = Schedule::single(gamma, 1.3 * predicted).unwrap();
    let ts = dynamics::run_schedule(&cfg, &schedule, predicted / 1500.0, &[0]).unwrap();
    let (t_star, p_star) = find_peak(&ts, 0).unwrap();
    c.check(
        p_star >= 1.0 - 5.0 / (n as f64).sqrt(),
        format!("peak probability {p_star} below 1 - 5/sqrt(N)"),
    );
    c.check(
        (t_star - predicted).abs() <= 0.03 * predicted,
        format!("peak time {t_star} not within 3% of {predicted}"),
    );
    c.finish();
}

#[test]
fn acceptance_05_two_stage_simplex_schedule() {
    let mut c = Criterion::new("5 (two-stage simplex search, M=100)");
    let m = 100usize;
    let cfg = SearchConfig {
        graph: graph::build_simplex_complete(m).unwrap(),
        marked: 0,
        gamma: 0.02,
        mode: HamiltonianMode::Adjacency,
    };
    let t1 = PI * (m as f64).powf(1.5) / 4.0;
    let t2 = PI * (m as f64).sqrt() / 2.0;
    let schedule = Schedule::new(vec![
        Stage {
            gamma: 0.02,
            duration: t1,
        },
        Stage {
            gamma: 0.01,
            duration: t2,
        },
    ])
    .unwrap();
    let ts = dynamics::run_schedule_reduced(&cfg, &schedule, 0.05, &[0, 1]).unwrap();

    // probability at cell b when stage 1 ends; 0.9547 in the frozen
    // calibration run, asserted with margin (stated floor: 0.5)
    let i1 = ts.nearest(t1);
    let p_b = ts.samples[i1][1];
    c.check(
        p_b >= 0.94,
        format!("stage-1 end p_b = {p_b}, frozen threshold 0.94"),
    );
    c.check(
        p_b >= 0.5,
        format!("stage-1 end p_b = {p_b} below stated floor 0.5"),
    );

    // peak marked probability during stage 2; 0.9826 in the calibration run
    let peak_a = ts
        .times
        .iter()
        .zip(ts.samples.iter())
        .filter(|(&t, _)| t >= t1)
        .map(|(_, row)| row[0])
        .fold(0.0f64, f64::max);
    c.check(
        peak_a >= 0.97,
        format!("stage-2 peak p_a = {peak_a}, frozen threshold 0.97"),
    );
    c.check(
        peak_a >= 0.5,
        format!("stage-2 peak p_a = {peak_a} below stated floor 0.5"),
    );
    c.finish();
}

#[test]
fn acceptance_06_oracle_gap_errors() {
    let mut c = Criterion::new("6 (predicted vs numeric gaps)");
    for n in [64usize, 256, 1024] {
        let g = graph::build_joined_complete(n).unwrap();
        let p = oracle::predict_joined(n).unwrap();
        let rs = spectral::reduce(&g, 0, p.critical_gammas[0], HamiltonianMode::Adjacency).unwrap();
        let eig = spectral::hermitian_eig(&rs.hamiltonian).unwrap();
        let numeric = eig.eigenvalues()[p.gap_levels.1] - eig.eigenvalues()[p.gap_levels.0];
        let rel = (numeric - p.energy_gap).abs() / p.energy_gap;
        let tol = 8.0 / (n as f64).sqrt();
        c.check(
            rel <= tol,
            format!("joined N={n}: rel gap error {rel} > {tol}"),
        );
    }
    for m in [16usize, 36, 64, 100] {
        let g = graph::build_simplex_complete(m).unwrap();
        let tol = 8.0 / (m as f64).sqrt();
        for (label, p) in [
            ("stage 1", oracle::predict_simplex_stage1(m).unwrap()),
            ("stage 2", oracle::predict_simplex_stage2(m).unwrap()),
        ] {
            let rs =
                spectral::reduce(&g, 0, p.critical_gammas[0], HamiltonianMode::Adjacency).unwrap();
            let eig = spectral::hermitian_eig(&rs.hamiltonian).unwrap();
            let numeric = eig.eigenvalues()[p.gap_levels.1] - eig.eigenvalues()[p.gap_levels.0];
            let rel = (numeric - p.energy_gap).abs() / p.energy_gap;
            c.check(
                rel <= tol,
                format!("simplex {label} M={m}: rel gap error {rel} > {tol}"),
            );
        }
    }
    c.finish();
}

#[test]
fn acceptance_07_reduction_exactness() {
    let mut c = Criterion::new("7 (full vs reduced dynamics)");
    let mut compare = |cfg: &SearchConfig, schedule: &Schedule, what: &str| {
        let dt = schedule.total_duration() / 400.0;
        let full = dynamics::run_schedule(cfg, schedule, dt, &[0]).unwrap();
        let red = dynamics::run_schedule_reduced(cfg, schedule, dt, &[0]).unwrap();
        let mut worst = 0.0f64;
        for (a, b) in full.samples.iter().zip(red.samples.iter()) {
            worst = worst.max((a[0] - b[0]).abs());
        }
        c.check(worst <= 1e-8, format!("{what}: max deviation {worst}"));
    };
    for n in [12usize, 64] {
        let p = oracle::predict_joined(n).unwrap();
        let cfg = SearchConfig {
            graph: graph::build_joined_complete(n).unwrap(),
            marked: 0,
            gamma: p.critical_gammas[0],
            mode: HamiltonianMode::Laplacian,
        };
        let schedule = Schedule::single(p.critical_gammas[0], 2.0 * p.runtime).unwrap();
        compare(&cfg, &schedule, &format!("joined N={n}"));
    }
    for m in [4usize, 8] {
        let s1 = oracle::predict_simplex_stage1(m).unwrap();
        let s2 = oracle::predict_simplex_stage2(m).unwrap();
        let cfg = SearchConfig {
            graph: graph::build_simplex_complete(m).unwrap(),
            marked: 0,
            gamma: s1.critical_gammas[1],
            mode: HamiltonianMode::Laplacian,
        };
        let schedule = Schedule::new(vec![
            Stage {
                gamma: s1.critical_gammas[1],
                duration: 2.0 * s1.runtime,
            },
            Stage {
                gamma: s2.critical_gammas[0],
                duration: 2.0 * s2.runtime,
            },
        ])
        .unwrap();
        compare(&cfg, &schedule, &format!("simplex M={m}"));
    }
    c.finish();
}

#[test]
fn acceptance_08_property_suite() {
    let mut c = Criterion::new("8 (property suite)");

    // norm conservation and time composability
    let g = graph::build_joined_complete(64).unwrap();
    let cfg = SearchConfig {
        graph: g.clone(),
        marked: 0,
        gamma: 2.0 / 64.0,
        mode: HamiltonianMode::Laplacian,
    };
    let h = dynamics::search_hamiltonian(&cfg).unwrap();
    let psi0 = dynamics::uniform_state(64).unwrap();
    let a = dynamics::evolve(&h, &psi0, 1.3).unwrap();
    c.check(
        (a.norm() - 1.0).abs() <= 1e-9,
        format!("norm drift {}", (a.norm() - 1.0).abs()),
    );
    let b = dynamics::evolve(&h, &a, 2.7).unwrap();
    let d = dynamics::evolve(&h, &psi0, 4.0).unwrap();
    c.check(
        (&b - &d).norm() <= 1e-9,
        format!("composability deviation {}", (&b - &d).norm()),
    );

    // equitable partitions are exactly integer-equitable
    for (g, cells) in [
        (graph::build_joined_complete(64).unwrap(), 5),
        (graph::build_simplex_complete(8).unwrap(), 7),
        (graph::build_complete(64).unwrap(), 2),
    ] {
        let p = spectral::equitable_partition(&g, 0).unwrap();
        c.check(
            p.num_cells() == cells,
            format!("{:?}: {} cells, want {cells}", g.family(), p.num_cells()),
        );
        c.check(
            p.is_equitable(&g),
            format!("{:?}: partition not equitable", g.family()),
        );
    }

    // spectral reconstruction
    for (name, m) in [
        (
            "K6 Laplacian",
            graph::build_complete(6).unwrap().laplacian(),
        ),
        ("joined N=64 Hamiltonian", h.clone()),
    ] {
        let eig = spectral::hermitian_eig(&m).unwrap();
        c.check(
            eig.reconstruction_error(&m) <= 1e-9,
            format!(
                "{name}: reconstruction error {}",
                eig.reconstruction_error(&m)
            ),
        );
        c.check(
            eig.orthonormality_error() <= 1e-10,
            format!(
                "{name}: orthonormality error {}",
                eig.orthonormality_error()
            ),
        );
    }

    // strongly regular parameters by brute-force common-neighbor counts
    for (g, k, lambda, mu) in [
        (graph::build_paley(13).unwrap(), 6usize, 2usize, 3usize),
        (graph::build_rook(3).unwrap(), 4, 1, 2),
        (graph::build_latin_square(4).unwrap(), 9, 4, 6),
    ] {
        let mut ok = g.degrees().iter().all(|&d| d == k);
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                let common = (0..g.n())
                    .filter(|&w| w != u && w != v && g.has_edge(u, w) && g.has_edge(v, w))
                    .count();
                let want = if g.has_edge(u, v) { lambda } else { mu };
                ok &= common == want;
            }
        }
        c.check(
            ok,
            format!(
                "{:?}: SRG({},{k},{lambda},{mu}) violated",
                g.family(),
                g.n()
            ),
        );
    }

    // effective-matrix eigenvector pairings
    let m = oracle::effective_matrix(oracle::EffectiveCase::Joined, 256).unwrap();
    let eig = spectral::hermitian_eig(&m).unwrap();
    let v0 = eig.eigenvectors().column(0);
    let v2 = eig.eigenvectors().column(2);
    c.check(
        (v0[0] + v0[1]).abs() / 2f64.sqrt() >= 1.0 - 1e-10,
        "joined effective: ground state not (a+b)/sqrt(2)".to_string(),
    );
    c.check(
        (v2[1] - v2[0]).abs() / 2f64.sqrt() >= 1.0 - 1e-10,
        "joined effective: top state not (b-a)/sqrt(2)".to_string(),
    );
    let m = oracle::effective_matrix(oracle::EffectiveCase::SimplexStage2, 64).unwrap();
    let eig = spectral::hermitian_eig(&m).unwrap();
    let v0 = eig.eigenvectors().column(0);
    let v3 = eig.eigenvectors().column(3);
    c.check(
        (v0[0] + v0[1]).abs() / 2f64.sqrt() >= 1.0 - 1e-10,
        "simplex effective: ground state not (a+b)/sqrt(2)".to_string(),
    );
    c.check(
        (v3[1] - v3[0]).abs() / 2f64.sqrt() >= 1.0 - 1e-10,
        "simplex effective: top state not (b-a)/sqrt(2)".to_string(),
    );

    c.finish();
}

#[test]
fn acceptance_09_sweep_structure() {
    let mut c = Criterion::new("9 (jumping-rate sweep structure)");
    let split = 0.35..=0.65;

    // complete graph: |s> and |a> split evenly at gamma_c; away from it
    // |s> concentrates on one eigenstate
    let n = 1024usize;
    let g = graph::build_complete(n).unwrap();
    let gc = 1.0 / n as f64;
    let rows = overlap_spectrum(
        &g,
        0,
        HamiltonianMode::Adjacency,
        &[gc / 2.0, gc, 2.0 * gc],
        &[Probe::Uniform, Probe::Cell(0)],
    )
    .unwrap();
    for (probe, name) in [(0, "s"), (1, "a")] {
        for k in 0..2 {
            let o = rows[1].overlaps[probe][k];
            c.check(
                split.contains(&o),
                format!("complete at gamma_c: |<{name}|psi_{k}>|^2 = {o}"),
            );
        }
    }
    for (i, gamma_label) in [(0, "gamma_c/2"), (2, "2 gamma_c")] {
        let max_s = rows[i].overlaps[0].iter().cloned().fold(0.0, f64::max);
        c.check(
            max_s >= 0.9,
            format!("complete at {gamma_label}: max |<s|psi_k>|^2 = {max_s}"),
        );
    }

    // joined complete graphs: the transferring probe is |a>, split across
    // psi_0 and psi_2 with <a|psi_1> ~ 0; away from gamma_c the marked
    // state is approximately a single eigenstate. (|s> itself stays split
    // between the two near-degenerate clique states at every gamma, so
    // the detuned concentration clause applies to |a>.)
    let n = 1024usize;
    let g = graph::build_joined_complete(n).unwrap();
    let gc = 2.0 / n as f64;
    let rows = overlap_spectrum(
        &g,
        0,
        HamiltonianMode::Adjacency,
        &[gc / 2.0, gc, 2.0 * gc],
        &[Probe::Uniform, Probe::Cell(0)],
    )
    .unwrap();
    for k in [0usize, 2] {
        let o = rows[1].overlaps[1][k];
        c.check(
            split.contains(&o),
            format!("joined at gamma_c: |<a|psi_{k}>|^2 = {o}"),
        );
    }
    c.check(
        rows[1].overlaps[1][1] <= 0.01,
        format!(
            "joined at gamma_c: |<a|psi_1>|^2 = {}",
            rows[1].overlaps[1][1]
        ),
    );
    for (i, gamma_label) in [(0, "gamma_c/2"), (2, "2 gamma_c")] {
        let max_a = rows[i].overlaps[1].iter().cloned().fold(0.0, f64::max);
        c.check(
            max_a >= 0.9,
            format!("joined at {gamma_label}: max |<a|psi_k>|^2 = {max_a}"),
        );
    }

    // simplex: stage-1 crossing splits |s> and |b> over psi_0, psi_1 at
    // gamma_c1; away from it |s> concentrates. Stage-2 crossing splits
    // |b> and |a> over psi_0, psi_3 at gamma_c2.
    let m = 100usize;
    let g = graph::build_simplex_complete(m).unwrap();
    let gc1 = 2.0 / m as f64;
    let gc2 = 1.0 / m as f64;
    let rows = overlap_spectrum(
        &g,
        0,
        HamiltonianMode::Adjacency,
        &[gc1 / 2.0, gc1, 2.0 * gc1, gc2],
        &[Probe::Uniform, Probe::Cell(0), Probe::Cell(1)],
    )
    .unwrap();
    for (probe, name) in [(0, "s"), (2, "b")] {
        for k in 0..2 {
            let o = rows[1].overlaps[probe][k];
            c.check(
                split.contains(&o),
                format!("simplex at gamma_c1: |<{name}|psi_{k}>|^2 = {o}"),
            );
        }
    }
    for (i, gamma_label) in [(0, "gamma_c1/2"), (2, "2 gamma_c1")] {
        let max_s = rows[i].overlaps[0].iter().cloned().fold(0.0, f64::max);
        c.check(
            max_s >= 0.9,
            format!("simplex at {gamma_label}: max |<s|psi_k>|^2 = {max_s}"),
        );
    }
    for (probe, name) in [(2, "b"), (1, "a")] {
        for k in [0usize, 3] {
            let o = rows[3].overlaps[probe][k];
            c.check(
                split.contains(&o),
                format!("simplex at gamma_c2: |<{name}|psi_{k}>|^2 = {o}"),
            );
        }
    }
    c.finish();
}
