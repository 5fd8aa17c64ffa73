//! Closed-form predictions from degenerate perturbation theory.
//!
//! These are the critical jumping rates, energy gaps, transfer times, and
//! eigenstate pairings for the complete graph, the joined complete graphs,
//! and both stages of the simplex-of-complete-graphs search. They validate
//! the numerics and generate jumping-rate schedules.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::dynamics::{Schedule, Stage};
use crate::error::{Error, Result};
use crate::graph::Family;

/// A predicted two-level transfer: critical jumping rate(s), gap, transfer
/// time, peak probability, and which eigenstates carry the transfer.
#[derive(Clone, Debug, Serialize)]
pub struct Prediction {
    /// Critical jumping rates; the first entry is the one to run at.
    pub critical_gammas: Vec<f64>,
    /// Avoided-crossing gap between the transfer levels.
    pub energy_gap: f64,
    /// Transfer time pi / gap.
    pub runtime: f64,
    /// Peak probability at the transfer target.
    pub peak_probability: f64,
    /// Indices (low, high) of the eigenvalue pair forming the gap, in
    /// ascending spectral order of the reduced Hamiltonian.
    pub gap_levels: (usize, usize),
    /// Human-readable description of the eigenstate pairing.
    pub eigenstate_pairing: String,
}

fn transfer(
    critical_gammas: Vec<f64>,
    energy_gap: f64,
    peak_probability: f64,
    gap_levels: (usize, usize),
    eigenstate_pairing: &str,
) -> Prediction {
    Prediction {
        critical_gammas,
        energy_gap,
        runtime: PI / energy_gap,
        peak_probability,
        gap_levels,
        eigenstate_pairing: eigenstate_pairing.to_string(),
    }
}

/// Complete graph with N vertices: gamma_c = 1/N, gap 2/sqrt(N), full
/// transfer |s> -> |a> in pi sqrt(N)/2.
pub fn predict_complete(n: usize) -> Result<Prediction> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "complete-graph prediction needs N >= 2".into(),
        ));
    }
    let nf = n as f64;
    Ok(transfer(
        vec![1.0 / nf],
        2.0 / nf.sqrt(),
        1.0,
        (0, 1),
        "|s> ~ (psi_0 + psi_1)/sqrt(2), |a> ~ (psi_0 - psi_1)/sqrt(2)",
    ))
}

/// Joined complete graphs with N total vertices: gamma_c = 2/N, gap
/// 2 sqrt(2/N) between levels 0 and 2, peak probability 1/2 at
/// (pi/2) sqrt(N/2).
pub fn predict_joined(n: usize) -> Result<Prediction> {
    if n < 6 || !n.is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "joined-graph prediction needs even N >= 6".into(),
        ));
    }
    let nf = n as f64;
    Ok(transfer(
        vec![2.0 / nf],
        2.0 * (2.0 / nf).sqrt(),
        0.5,
        (0, 2),
        "half of |s> ~ (psi_0 + psi_2)/sqrt(2), |a> ~ (psi_0 - psi_2)/sqrt(2), <a|psi_1> = 0",
    ))
}

/// Exact first-stage critical jumping rate for the simplex of complete
/// graphs: (-M + sqrt(M) sqrt(M + 8)) / (2M), which is 2/M to leading
/// order.
pub fn simplex_gamma_c1_exact(m: usize) -> f64 {
    let mf = m as f64;
    (-mf + mf.sqrt() * (mf + 8.0).sqrt()) / (2.0 * mf)
}

/// Leading-order first-stage critical jumping rate 2/M.
pub fn simplex_gamma_c1_approx(m: usize) -> f64 {
    2.0 / m as f64
}

/// Simplex stage 1: |s> -> |b> transfer with gap 4/M^(3/2) over
/// t1 = pi M^(3/2) / 4. `critical_gammas` lists the exact rate first and
/// the leading-order 2/M second.
pub fn predict_simplex_stage1(m: usize) -> Result<Prediction> {
    if m < 3 {
        return Err(Error::InvalidParameter(
            "simplex prediction needs M >= 3".into(),
        ));
    }
    let mf = m as f64;
    Ok(transfer(
        vec![simplex_gamma_c1_exact(m), simplex_gamma_c1_approx(m)],
        4.0 / mf.powf(1.5),
        1.0,
        (0, 1),
        "|s> ~ (psi_0 + psi_1)/sqrt(2), |b> ~ (psi_0 - psi_1)/sqrt(2)",
    ))
}

/// Simplex stage 2: |b> -> |a> transfer at gamma_c2 = 1/M with gap
/// 2/sqrt(M) between levels 0 and 3 over t2 = pi sqrt(M) / 2.
pub fn predict_simplex_stage2(m: usize) -> Result<Prediction> {
    if m < 3 {
        return Err(Error::InvalidParameter(
            "simplex prediction needs M >= 3".into(),
        ));
    }
    let mf = m as f64;
    Ok(transfer(
        vec![1.0 / mf],
        2.0 / mf.sqrt(),
        1.0,
        (0, 3),
        "|b> ~ (psi_0 + psi_3)/sqrt(2), |a> ~ (psi_0 - psi_3)/sqrt(2)",
    ))
}

/// Degenerate-block effective Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EffectiveCase {
    /// Joined complete graphs: 3x3 block over {a, b, e}.
    Joined,
    /// Simplex second stage: 4x4 block over {a, b, d, g}.
    SimplexStage2,
}

/// The degenerate-block matrix whose eigenpairs give the closed-form
/// pairings.
pub fn effective_matrix(case: EffectiveCase, size: usize) -> Result<DMatrix<f64>> {
    match case {
        EffectiveCase::Joined => {
            if size < 2 {
                return Err(Error::InvalidParameter(
                    "joined effective matrix needs N >= 2".into(),
                ));
            }
            let c = (2.0 / size as f64).sqrt();
            #[rustfmt::skip]
            let m = DMatrix::from_row_slice(3, 3, &[
                -1.0, -c,   0.0,
                -c,   -1.0, 0.0,
                0.0,  0.0,  -1.0,
            ]);
            Ok(m)
        }
        EffectiveCase::SimplexStage2 => {
            if size < 1 {
                return Err(Error::InvalidParameter(
                    "simplex effective matrix needs M >= 1".into(),
                ));
            }
            let c = 1.0 / (size as f64).sqrt();
            #[rustfmt::skip]
            let m = DMatrix::from_row_slice(4, 4, &[
                -1.0, -c,   0.0,  0.0,
                -c,   -1.0, 0.0,  0.0,
                0.0,  0.0,  -1.0, 0.0,
                0.0,  0.0,  0.0,  -1.0,
            ]);
            Ok(m)
        }
    }
}

/// The jumping-rate schedule the predictions call for: a single stage for
/// the complete and joined graphs, the two-stage protocol for the simplex.
///
/// `exact_gamma_c1` selects the exact first-stage rate instead of the
/// leading-order 2/M; the durations always come from the predicted gaps.
pub fn schedule_for(family: &Family, exact_gamma_c1: bool) -> Result<Schedule> {
    match *family {
        Family::Complete { n } => {
            let p = predict_complete(n)?;
            Schedule::single(p.critical_gammas[0], p.runtime)
        }
        Family::JoinedComplete { n } => {
            let p = predict_joined(n)?;
            Schedule::single(p.critical_gammas[0], p.runtime)
        }
        Family::SimplexComplete { m } => {
            let s1 = predict_simplex_stage1(m)?;
            let s2 = predict_simplex_stage2(m)?;
            let gamma1 = if exact_gamma_c1 {
                simplex_gamma_c1_exact(m)
            } else {
                simplex_gamma_c1_approx(m)
            };
            Schedule::new(vec![
                Stage {
                    gamma: gamma1,
                    duration: s1.runtime,
                },
                Stage {
                    gamma: s2.critical_gammas[0],
                    duration: s2.runtime,
                },
            ])
        }
        ref other => Err(Error::UnsupportedFamily(other.to_string())),
    }
}

/// One row of the reference table of quantum-walk search scalings on
/// periodic cubic lattices (reference data, not verified numerically).
#[derive(Clone, Debug, Serialize)]
pub struct LatticeScaling {
    pub dimension: String,
    pub single_runtime: String,
    pub success_probability: String,
    pub total_runtime: String,
}

/// Runtime scalings for search on d-dimensional periodic lattices.
pub fn lattice_scaling_table(d: usize) -> Result<LatticeScaling> {
    let (dimension, single, prob, total) = match d {
        0 | 1 => {
            return Err(Error::InvalidParameter(
                "lattice scaling table covers d >= 2".into(),
            ))
        }
        2 => ("2", "N/log(N)", "log^2(N)/N", "N^2/log^3(N)"),
        3 => ("3", "N^(2/3)", "1/N^(1/3)", "N"),
        4 => ("4", "sqrt(N log(N))", "1/log(N)", "sqrt(N) log^(3/2)(N)"),
        _ => (">=5", "N^(1/2)", "1", "N^(1/2)"),
    };
    Ok(LatticeScaling {
        dimension: dimension.to_string(),
        single_runtime: single.to_string(),
        success_probability: prob.to_string(),
        total_runtime: total.to_string(),
    })
}
