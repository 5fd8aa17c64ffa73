//! Subcommand implementations.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use qwalk::connectivity::connectivity_report;
use qwalk::dynamics::{
    self, overlap_at, HamiltonianMode, Probe, Schedule, SearchConfig, TimeSeries,
};
use qwalk::graph::{Family, Graph};
use qwalk::oracle::{self, Prediction};
use qwalk::spectral::{self, ReducedSpace};

use crate::emit::{csv, sig12, write_out};
use crate::SearchContextArgs;

/// Full-space simulation is the default up to this many vertices; larger
/// graphs run in the equitable-partition reduction, which is exact.
const FULL_SPACE_LIMIT: usize = 2048;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Io(std::io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numeric(msg) => write!(f, "numerical contract violation: {msg}"),
            CliError::Io(err) => write!(f, "io error: {err}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn to_json(&self) -> String {
        let kind = match self {
            CliError::Config(_) => "config",
            CliError::Numeric(_) => "numeric",
            CliError::Io(_) => "io",
        };
        json!({"error": {"kind": kind, "message": self.to_string()}}).to_string()
    }
}

impl From<qwalk::Error> for CliError {
    fn from(err: qwalk::Error) -> CliError {
        if err.is_numerical() {
            CliError::Numeric(err.to_string())
        } else {
            CliError::Config(err.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> CliError {
        CliError::Io(err)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn parse_family(spec: &str) -> Result<Family> {
    Ok(Family::parse(spec)?)
}

fn build_graph(spec: &str) -> Result<(Family, Graph)> {
    let family = parse_family(spec)?;
    Ok((family, family.build()?))
}

fn parse_mode(s: &str) -> Result<HamiltonianMode> {
    Ok(s.parse::<HamiltonianMode>()?)
}

fn search_config(
    spec: &str,
    ctx: &SearchContextArgs,
    gamma: f64,
) -> Result<(Family, SearchConfig)> {
    let (family, graph) = build_graph(spec)?;
    let cfg = SearchConfig {
        marked: ctx.marked.unwrap_or_else(|| family.default_marked()),
        gamma,
        mode: parse_mode(&ctx.mode)?,
        graph,
    };
    cfg.validate()?;
    Ok((family, cfg))
}

/// Observable cells from a spec like `a,b`.
fn parse_observables(s: &str, space: &ReducedSpace) -> Result<Vec<usize>> {
    s.split(',')
        .map(|name| {
            space.partition().cell_by_label(name.trim()).ok_or_else(|| {
                CliError::Config(format!(
                    "unknown observable {:?}; this partition has cells {}",
                    name,
                    space.partition().labels().join(",")
                ))
            })
        })
        .collect()
}

fn parse_probes(s: &str) -> Result<Vec<Probe>> {
    s.split(',').map(|p| Ok(Probe::parse(p.trim())?)).collect()
}

/// `lo:hi:steps` inclusive.
fn parse_gammas(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Config(format!("expected lo:hi:steps, got {s:?}")));
    }
    let lo: f64 = parts[0]
        .parse()
        .map_err(|_| CliError::Config(format!("invalid lower bound {:?}", parts[0])))?;
    let hi: f64 = parts[1]
        .parse()
        .map_err(|_| CliError::Config(format!("invalid upper bound {:?}", parts[1])))?;
    let steps: usize = parts[2]
        .parse()
        .map_err(|_| CliError::Config(format!("invalid step count {:?}", parts[2])))?;
    if steps == 0 || !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi < lo {
        return Err(CliError::Config(format!("invalid range {s:?}")));
    }
    if steps == 1 {
        return Ok(vec![lo]);
    }
    let h = (hi - lo) / (steps - 1) as f64;
    Ok((0..steps).map(|k| lo + h * k as f64).collect())
}

fn use_full_space(space: &str, n: usize) -> Result<bool> {
    match space {
        "full" => Ok(true),
        "reduced" => Ok(false),
        "auto" => Ok(n <= FULL_SPACE_LIMIT),
        other => Err(CliError::Config(format!("unknown space {other:?}"))),
    }
}

fn time_series_csv(ts: &TimeSeries) -> String {
    let mut header = vec!["time".to_string()];
    header.extend(ts.labels.iter().map(|l| format!("p_{l}")));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows: Vec<Vec<String>> = ts
        .times
        .iter()
        .zip(ts.samples.iter())
        .map(|(&t, row)| {
            let mut cells = vec![sig12(t)];
            cells.extend(row.iter().map(|&p| sig12(p)));
            cells
        })
        .collect();
    csv(&header_refs, &rows)
}

fn time_series_json(
    family: &Family,
    cfg: &SearchConfig,
    schedule: &Schedule,
    ts: &TimeSeries,
) -> String {
    serde_json::to_string_pretty(&json!({
        "graph": family.to_string(),
        "marked": cfg.marked,
        "mode": cfg.mode.to_string(),
        "schedule": schedule.stages().iter().map(|s| json!({"gamma": s.gamma, "duration": s.duration})).collect::<Vec<_>>(),
        "observables": ts.labels,
        "times": ts.times,
        "samples": ts.samples,
        "max_norm_drift": ts.max_norm_drift(),
    }))
    .expect("serialization cannot fail")
}

pub fn graph(spec: &str, format: &str, output: Option<&Path>) -> Result<()> {
    let (_, g) = build_graph(spec)?;
    let content = match format {
        "json" => {
            let mut s = g.to_json();
            s.push('\n');
            s
        }
        "edgelist" => g.to_edge_list(),
        other => return Err(CliError::Config(format!("unknown format {other:?}"))),
    };
    Ok(write_out(output, &content)?)
}

pub fn connectivity(specs: &[String], table: bool, output: Option<&Path>) -> Result<()> {
    let reports = specs
        .iter()
        .map(|spec| {
            let (_, g) = build_graph(spec)?;
            Ok(connectivity_report(&g)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let content = if table {
        let rows: Vec<Vec<String>> = reports
            .iter()
            .map(|r| {
                vec![
                    r.graph.clone(),
                    r.n.to_string(),
                    r.degree_min.to_string(),
                    r.degree_max.to_string(),
                    r.vertex_connectivity.to_string(),
                    r.edge_connectivity.to_string(),
                    sig12(r.algebraic_connectivity),
                    sig12(r.normalized_algebraic_connectivity),
                ]
            })
            .collect();
        csv(
            &[
                "graph",
                "n",
                "degree_min",
                "degree_max",
                "vertex_connectivity",
                "edge_connectivity",
                "algebraic_connectivity",
                "normalized_algebraic_connectivity",
            ],
            &rows,
        )
    } else if reports.len() == 1 {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&reports[0]).expect("serialization cannot fail")
        )
    } else {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&reports).expect("serialization cannot fail")
        )
    };
    Ok(write_out(output, &content)?)
}

pub fn spectrum(
    spec: &str,
    ctx: &SearchContextArgs,
    gamma: f64,
    output: Option<&Path>,
) -> Result<()> {
    let (family, cfg) = search_config(spec, ctx, gamma)?;
    let space = ReducedSpace::new(&cfg.graph, cfg.marked)?;
    let mut probes = vec![Probe::Uniform, Probe::Cell(0)];
    if space.num_cells() > 1 {
        probes.push(Probe::Cell(1));
    }
    let row = overlap_at(&space, cfg.gamma, cfg.mode, &probes)?;
    let overlaps: serde_json::Map<String, serde_json::Value> = probes
        .iter()
        .zip(row.overlaps.iter())
        .map(|(p, o)| (p.name(), json!(o)))
        .collect();
    let content = format!(
        "{}\n",
        serde_json::to_string_pretty(&json!({
            "graph": family.to_string(),
            "marked": cfg.marked,
            "mode": cfg.mode.to_string(),
            "gamma": cfg.gamma,
            "cells": space.partition().labels(),
            "cell_sizes": space.partition().sizes(),
            "energies": row.energies,
            "squared_overlaps": overlaps,
        }))
        .expect("serialization cannot fail")
    );
    Ok(write_out(output, &content)?)
}

pub fn sweep(
    spec: &str,
    ctx: &SearchContextArgs,
    gammas: &str,
    probes: &str,
    output: &crate::OutputArgs,
) -> Result<()> {
    let gammas = parse_gammas(gammas)?;
    let probes = parse_probes(probes)?;
    let (family, cfg) = search_config(spec, ctx, gammas[0])?;
    let space = ReducedSpace::new(&cfg.graph, cfg.marked)?;
    let rows = gammas
        .par_iter()
        .map(|&gamma| overlap_at(&space, gamma, cfg.mode, &probes))
        .collect::<qwalk::Result<Vec<_>>>()?;
    let content = match output.out.as_str() {
        "csv" => {
            let mut header = vec!["gamma".to_string(), "k".to_string(), "energy".to_string()];
            header.extend(probes.iter().map(|p| format!("overlap_{}", p.name())));
            let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
            let mut lines = Vec::new();
            for row in &rows {
                for k in 0..row.energies.len() {
                    let mut cells = vec![sig12(row.gamma), k.to_string(), sig12(row.energies[k])];
                    cells.extend(row.overlaps.iter().map(|o| sig12(o[k])));
                    lines.push(cells);
                }
            }
            csv(&header_refs, &lines)
        }
        "json" => format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "graph": family.to_string(),
                "marked": cfg.marked,
                "mode": cfg.mode.to_string(),
                "probes": probes.iter().map(|p| p.name()).collect::<Vec<_>>(),
                "rows": rows,
            }))
            .expect("serialization cannot fail")
        ),
        other => return Err(CliError::Config(format!("unknown output format {other:?}"))),
    };
    Ok(write_out(output.output.as_deref(), &content)?)
}

#[allow(clippy::too_many_arguments)]
pub fn search(
    spec: &str,
    ctx: &SearchContextArgs,
    gamma: f64,
    tmax: f64,
    dt: Option<f64>,
    observables: &str,
    space_arg: &str,
    output: &crate::OutputArgs,
) -> Result<()> {
    if !(tmax.is_finite() && tmax > 0.0) {
        return Err(CliError::Config(format!(
            "tmax must be positive, got {tmax}"
        )));
    }
    let (family, cfg) = search_config(spec, ctx, gamma)?;
    let schedule = Schedule::single(gamma, tmax)?;
    let dt = dt.unwrap_or(tmax / 2000.0);
    let space = ReducedSpace::new(&cfg.graph, cfg.marked)?;
    let cells = parse_observables(observables, &space)?;
    let ts = if use_full_space(space_arg, cfg.graph.n())? {
        dynamics::run_schedule(&cfg, &schedule, dt, &cells)?
    } else {
        dynamics::run_schedule_reduced(&cfg, &schedule, dt, &cells)?
    };
    let content = match output.out.as_str() {
        "csv" => time_series_csv(&ts),
        "json" => time_series_json(&family, &cfg, &schedule, &ts),
        other => return Err(CliError::Config(format!("unknown output format {other:?}"))),
    };
    Ok(write_out(output.output.as_deref(), &content)?)
}

#[allow(clippy::too_many_arguments)]
pub fn schedule(
    spec: &str,
    ctx: &SearchContextArgs,
    stages: Option<&str>,
    auto: bool,
    exact_gamma: bool,
    dt: Option<f64>,
    observables: &str,
    space_arg: &str,
    output: &crate::OutputArgs,
) -> Result<()> {
    let family = parse_family(spec)?;
    let schedule = match (stages, auto) {
        (Some(s), false) => Schedule::parse(s)?,
        (None, true) => oracle::schedule_for(&family, exact_gamma)?,
        (None, false) => {
            return Err(CliError::Config("provide --stages or --auto".into()));
        }
        (Some(_), true) => unreachable!("clap conflicts_with"),
    };
    let first_gamma = schedule.stages()[0].gamma;
    let (family, cfg) = search_config(spec, ctx, first_gamma)?;
    // per-stage resolution: the shortest stage still gets 2000 samples
    let dt = dt.unwrap_or_else(|| {
        schedule
            .stages()
            .iter()
            .map(|s| s.duration)
            .fold(f64::INFINITY, f64::min)
            / 2000.0
    });
    let space = ReducedSpace::new(&cfg.graph, cfg.marked)?;
    let cells = parse_observables(observables, &space)?;
    let ts = if use_full_space(space_arg, cfg.graph.n())? {
        dynamics::run_schedule(&cfg, &schedule, dt, &cells)?
    } else {
        dynamics::run_schedule_reduced(&cfg, &schedule, dt, &cells)?
    };
    let content = match output.out.as_str() {
        "csv" => time_series_csv(&ts),
        "json" => time_series_json(&family, &cfg, &schedule, &ts),
        other => return Err(CliError::Config(format!("unknown output format {other:?}"))),
    };
    Ok(write_out(output.output.as_deref(), &content)?)
}

fn predictions_for(family: &Family) -> Result<Vec<Prediction>> {
    match *family {
        Family::Complete { n } => Ok(vec![oracle::predict_complete(n)?]),
        Family::JoinedComplete { n } => Ok(vec![oracle::predict_joined(n)?]),
        Family::SimplexComplete { m } => Ok(vec![
            oracle::predict_simplex_stage1(m)?,
            oracle::predict_simplex_stage2(m)?,
        ]),
        Family::Cubic { d, .. } => {
            // reference scalings only; no numeric prediction
            let row = oracle::lattice_scaling_table(d)?;
            Err(CliError::Config(format!(
                "cubic lattices expose reference scalings only: single runtime {}, success probability {}, total runtime {}",
                row.single_runtime, row.success_probability, row.total_runtime
            )))
        }
        ref other => Err(qwalk::Error::UnsupportedFamily(other.to_string()).into()),
    }
}

pub fn predict(spec: &str, output: Option<&Path>) -> Result<()> {
    let family = parse_family(spec)?;
    let content = match family {
        Family::Cubic { d, .. } => {
            let row = oracle::lattice_scaling_table(d)?;
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "graph": family.to_string(),
                    "reference_scalings": row,
                }))
                .expect("serialization cannot fail")
            )
        }
        _ => {
            let stages = predictions_for(&family)?;
            format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "graph": family.to_string(),
                    "stages": stages,
                }))
                .expect("serialization cannot fail")
            )
        }
    };
    Ok(write_out(output, &content)?)
}

/// Numeric gap between the predicted levels at one jumping rate.
fn numeric_gap(
    space: &ReducedSpace,
    gamma: f64,
    mode: HamiltonianMode,
    levels: (usize, usize),
) -> Result<f64> {
    let eig = spectral::hermitian_eig(&space.hamiltonian(gamma, mode))?;
    Ok(eig.eigenvalues()[levels.1] - eig.eigenvalues()[levels.0])
}

/// Locate the avoided crossing: golden-section minimum of the level gap
/// over [pred/2, 2 pred].
fn numeric_gamma_c(
    space: &ReducedSpace,
    mode: HamiltonianMode,
    levels: (usize, usize),
    predicted: f64,
) -> Result<f64> {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut lo = predicted / 2.0;
    let mut hi = predicted * 2.0;
    let mut x1 = hi - phi * (hi - lo);
    let mut x2 = lo + phi * (hi - lo);
    let mut f1 = numeric_gap(space, x1, mode, levels)?;
    let mut f2 = numeric_gap(space, x2, mode, levels)?;
    for _ in 0..200 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = numeric_gap(space, x1, mode, levels)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = numeric_gap(space, x2, mode, levels)?;
        }
        if (hi - lo) < 1e-12 * predicted {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn rel_err(numeric: f64, predicted: f64) -> f64 {
    (numeric - predicted).abs() / predicted.abs()
}

pub fn compare(spec: &str, output: Option<&Path>) -> Result<()> {
    let (family, graph) = build_graph(spec)?;
    let predictions = predictions_for(&family)?;
    let marked = family.default_marked();
    let mode = HamiltonianMode::Adjacency;
    let space = ReducedSpace::new(&graph, marked)?;

    let mut stages = Vec::new();
    for (index, p) in predictions.iter().enumerate() {
        let gamma_pred = p.critical_gammas[0];
        let gamma_num = numeric_gamma_c(&space, mode, p.gap_levels, gamma_pred)?;
        let gap_num = numeric_gap(&space, gamma_pred, mode, p.gap_levels)?;

        // simulate the transfer this stage performs: |s> for the first
        // stage, the previous target cell for later ones
        let source = if index == 0 {
            space.uniform_reduced()
        } else {
            space.cell_state(1)
        };
        let target_cell = match (family, index) {
            (Family::SimplexComplete { .. }, 0) => 1usize,
            _ => 0usize,
        };
        let prop = dynamics::Propagator::new(&space.hamiltonian(gamma_pred, mode))?;
        let tmax = 1.5 * p.runtime;
        let samples = 3000usize;
        let mut best = (0.0f64, 0.0f64);
        for k in 0..=samples {
            let t = tmax * k as f64 / samples as f64;
            let psi = prop.evolve(&source, t);
            let prob = psi[target_cell].norm_sqr();
            if prob > best.1 {
                best = (t, prob);
            }
        }
        let (t_num, p_num) = best;

        stages.push(json!({
            "stage": index + 1,
            "predicted": p,
            "numeric": {
                "gamma_c": gamma_num,
                "energy_gap": gap_num,
                "runtime": t_num,
                "peak_probability": p_num,
            },
            "relative_errors": {
                "gamma_c": rel_err(gamma_num, gamma_pred),
                "energy_gap": rel_err(gap_num, p.energy_gap),
                "runtime": rel_err(t_num, p.runtime),
                "peak_probability": rel_err(p_num, p.peak_probability),
            },
        }));
    }
    let content = format!(
        "{}\n",
        serde_json::to_string_pretty(&json!({
            "graph": family.to_string(),
            "marked": marked,
            "mode": mode.to_string(),
            "stages": stages,
        }))
        .expect("serialization cannot fail")
    );
    Ok(write_out(output, &content)?)
}
