//! Scenario-matrix execution: every (network × disturbance × controller ×
//! seed) cell runs generate → decompose → resolve controller → simulate →
//! metrics, in parallel up to the configured degree. Output is a pure
//! function of the config: records sort by cell key, every artifact carries
//! the config hash, and per-cell failures are recorded without stopping the
//! rest of the matrix.

use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::controller::{baseline_inertia, ControllerPreset, M0Mode};
use crate::dynamics::{
    simulate_with_spectrum, AdaptiveInertia, ConstantInertia, InertiaPolicy, Trajectory,
};
use crate::error::{Error, Result};
use crate::metrics::{
    balanced_fragility, compare, fragility, relaxation_time, stability_scan, NetworkMeta,
    RunReport,
};
use crate::netgen::{laplacian, LaplacianMatrix, Network};
use crate::spectral::{decompose, Spectrum};
use crate::xplab::config::{ControllerChoice, ControllerKind, ExperimentConfig};

/// Inertia probe times reported in the quantization table (s).
pub const PROBE_TIMES: [f64; 5] = [0.1, 1.0, 3.0, 5.0, 10.0];

/// Number of inertia values the stability scan samples across the observed
/// M(t) range.
const SCAN_POINTS: usize = 5;

/// M(t) sampled at one probe time; `None` when the probe lies beyond the
/// simulated horizon.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeSample {
    pub t: f64,
    #[serde(rename = "M")]
    pub m: Option<f64>,
}

/// One completed cell: performance report plus controller quantization data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Canonical cell id `{kind}-n{n}-s{seed}-{disturbance}-{controller}`.
    pub cell: String,
    pub config_hash: String,
    pub controller_kind: ControllerKind,
    #[serde(rename = "M0")]
    pub m0: f64,
    pub gain: f64,
    pub probes: Vec<ProbeSample>,
    pub report: RunReport,
}

/// A cell that errored; the matrix keeps going.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub cell: String,
    pub message: String,
}

/// Comparison of one adaptive arm against its constant baseline.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub network: String,
    pub disturbance: String,
    pub controller: String,
    pub seed: u64,
    pub h_const: f64,
    pub h_adapt: f64,
    pub h_reduction: f64,
    pub tau_const: f64,
    pub tau_adapt: f64,
    pub tau_reduction: f64,
    pub max_real_part_const: f64,
    pub max_real_part_adapt: f64,
}

/// Everything a matrix run produces (tables are derived from this).
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOutcome {
    pub config_hash: String,
    pub records: Vec<RunRecord>,
    pub comparisons: Vec<ComparisonRow>,
    pub failures: Vec<CellFailure>,
    pub expected_cells: usize,
}

impl MatrixOutcome {
    pub fn all_cells_completed(&self) -> bool {
        self.failures.is_empty() && self.records.len() == self.expected_cells
    }

    /// Human-readable run summary for the CLI.
    pub fn print_summary(&self) {
        println!(
            "matrix {}: {}/{} cells completed, {} comparisons",
            self.config_hash,
            self.records.len(),
            self.expected_cells,
            self.comparisons.len()
        );
        for s in crate::xplab::tables::summarize(&self.comparisons) {
            println!(
                "  {}: avg H reduction {:.2}% over {} cells, avg tau reduction {:.2}%",
                s.network,
                s.avg_h_reduction * 100.0,
                s.cells,
                s.avg_tau_reduction * 100.0
            );
        }
        for f in &self.failures {
            println!("  FAILED {}: {}", f.cell, f.message);
        }
    }
}

struct PreparedNetwork {
    network: Network,
    laplacian: LaplacianMatrix,
    spectrum: Spectrum,
}

impl PreparedNetwork {
    fn label(&self) -> String {
        NetworkMeta::of(&self.network).label()
    }
}

/// Run the full matrix without touching the filesystem.
pub fn run_matrix(cfg: &ExperimentConfig) -> Result<MatrixOutcome> {
    run_matrix_inner(cfg, None)
}

/// Run the full matrix and stream each cell's trajectory CSV into
/// `out_dir/trajectories/` as it completes (bounded memory); network and
/// spectrum artifacts are written up front.
pub fn run_matrix_to_dir(cfg: &ExperimentConfig, out_dir: &Path) -> Result<MatrixOutcome> {
    std::fs::create_dir_all(out_dir.join("trajectories"))?;
    std::fs::create_dir_all(out_dir.join("networks"))?;
    std::fs::create_dir_all(out_dir.join("spectra"))?;
    run_matrix_inner(cfg, Some(out_dir))
}

fn run_matrix_inner(cfg: &ExperimentConfig, out_dir: Option<&Path>) -> Result<MatrixOutcome> {
    cfg.validate()?;
    let config_hash = cfg.hash();

    // Networks and spectra are prepared serially: they are shared by every
    // disturbance/controller cell and their artifacts must be written once.
    let mut prepared = Vec::new();
    for spec in &cfg.networks {
        for &seed in &cfg.seeds {
            let network = spec.build(seed)?;
            let lap = laplacian(&network, cfg.sim.coupling)?;
            let spectrum = decompose(&lap)?;
            let p = PreparedNetwork {
                network,
                laplacian: lap,
                spectrum,
            };
            if let Some(dir) = out_dir {
                let label = p.label();
                std::fs::write(
                    dir.join("networks").join(format!("{label}.json")),
                    p.network.to_json(),
                )?;
                std::fs::write(
                    dir.join("spectra").join(format!("{label}.csv")),
                    p.spectrum.to_csv(),
                )?;
            }
            prepared.push(Arc::new(p));
        }
    }

    // Cell list in canonical order.
    let mut cells = Vec::new();
    for net in &prepared {
        for dist in &cfg.disturbances {
            for ctrl in &cfg.controllers {
                cells.push((Arc::clone(net), dist.clone(), ctrl.clone()));
            }
        }
    }
    let expected_cells = cells.len();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;

    let results: Vec<std::result::Result<RunRecord, CellFailure>> = pool.install(|| {
        cells
            .par_iter()
            .map(|(net, dist, ctrl)| {
                let cell = cell_id(net, dist.label(), &ctrl.name);
                run_cell(cfg, net, dist, ctrl, &cell, &config_hash, out_dir, false)
                    .map(|(record, _)| record)
                    .map_err(|e| CellFailure {
                        cell: cell.clone(),
                        message: e.to_string(),
                    })
            })
            .collect()
    });

    let mut records = Vec::new();
    let mut failures = Vec::new();
    for r in results {
        match r {
            Ok(rec) => records.push(rec),
            Err(f) => failures.push(f),
        }
    }
    records.sort_by(|a, b| a.cell.cmp(&b.cell));
    failures.sort_by(|a, b| a.cell.cmp(&b.cell));

    let comparisons = comparisons_from_records(&mut records)?;

    Ok(MatrixOutcome {
        config_hash,
        records,
        comparisons,
        failures,
        expected_cells,
    })
}

fn cell_id(net: &PreparedNetwork, disturbance: &str, controller: &str) -> String {
    format!("{}-{disturbance}-{controller}", net.label())
}

/// Pair each adaptive record with the constant baseline of the same
/// (network, disturbance, seed), fill `reduction_vs_baseline` in place and
/// return the comparison rows. Also used by `report` to re-render tables
/// from stored records.
pub fn comparisons_from_records(records: &mut [RunRecord]) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::new();
    let baselines: Vec<(usize, String, String, u64)> = records
        .iter()
        .enumerate()
        .filter(|(_, r)| r.controller_kind == ControllerKind::Constant)
        .map(|(i, r)| {
            (
                i,
                r.report.network.label(),
                r.report.disturbance.clone(),
                r.report.network.seed,
            )
        })
        .collect();

    for i in 0..records.len() {
        if records[i].controller_kind != ControllerKind::Adaptive {
            continue;
        }
        let key = (
            records[i].report.network.label(),
            records[i].report.disturbance.clone(),
            records[i].report.network.seed,
        );
        let baseline_idx = baselines
            .iter()
            .find(|(_, n, d, s)| *n == key.0 && *d == key.1 && *s == key.2)
            .map(|(idx, _, _, _)| *idx)
            .ok_or_else(|| {
                Error::MetadataMismatch(format!(
                    "no constant baseline for cell {}",
                    records[i].cell
                ))
            })?;
        let reduction = compare(&records[baseline_idx].report, &records[i].report)?;
        records[i].report.reduction_vs_baseline = Some(reduction);
        let base = &records[baseline_idx].report;
        let adapt = &records[i].report;
        rows.push(ComparisonRow {
            network: adapt.network.label(),
            disturbance: adapt.disturbance.clone(),
            controller: adapt.controller.clone(),
            seed: adapt.network.seed,
            h_const: base.h_t,
            h_adapt: adapt.h_t,
            h_reduction: reduction.h,
            tau_const: base.tau,
            tau_adapt: adapt.tau,
            tau_reduction: reduction.tau,
            max_real_part_const: base.max_real_part,
            max_real_part_adapt: adapt.max_real_part,
        });
    }
    rows.sort_by(|a, b| {
        (&a.network, &a.disturbance, &a.controller, a.seed)
            .cmp(&(&b.network, &b.disturbance, &b.controller, b.seed))
    });
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    cfg: &ExperimentConfig,
    net: &PreparedNetwork,
    dist_cfg: &crate::xplab::config::DisturbanceConfig,
    choice: &ControllerChoice,
    cell: &str,
    config_hash: &str,
    out_dir: Option<&Path>,
    keep_trajectory: bool,
) -> Result<(RunRecord, Option<Trajectory>)> {
    let disturbance = dist_cfg.resolve()?;
    let kind = net.network.kind();

    let (mut policy, m0, gain): (Box<dyn InertiaPolicy>, f64, f64) = match choice.kind {
        ControllerKind::Constant => {
            let m = match choice.value {
                Some(v) => v,
                None => resolve_m0(cfg, kind, &net.spectrum),
            };
            (Box::new(ConstantInertia::new(m)?), m, 0.0)
        }
        ControllerKind::Adaptive => {
            let mut preset = choice
                .preset
                .clone()
                .unwrap_or_else(|| ControllerPreset::reported(kind));
            if cfg.use_reported_m0 {
                preset.m0_mode = M0Mode::Explicit;
                preset.m0_value = Some(ControllerPreset::reported_m0_value(kind));
            }
            let ctrl_cfg = preset.resolve(&net.spectrum, cfg.sim.damping)?;
            let m0 = ctrl_cfg.m0;
            let gain = ctrl_cfg.gain;
            (Box::new(AdaptiveInertia::new(ctrl_cfg)?), m0, gain)
        }
    };

    let traj = simulate_with_spectrum(
        &net.laplacian,
        &net.spectrum,
        &disturbance,
        &cfg.sim,
        policy.as_mut(),
    )?;

    let h_t = fragility(&traj, cfg.horizon_t)?;
    let h_inf = balanced_fragility(&traj)?;
    let tau = relaxation_time(&traj, h_inf)?;
    let (m_lo, m_hi) = traj.inertia_range();
    let scan = stability_scan(
        &net.spectrum,
        cfg.sim.damping,
        &scan_values(m_lo, m_hi),
        cfg.stability_threshold,
    )?;

    let report = RunReport {
        network: NetworkMeta::of(&net.network),
        disturbance: dist_cfg.label().to_string(),
        controller: choice.name.clone(),
        horizon_t: cfg.horizon_t,
        h_t,
        h_inf,
        tau,
        max_real_part: scan.max_real_part,
        stability_pass: scan.pass,
        m_range: (m_lo, m_hi),
        reduction_vs_baseline: None,
    };

    let probes = PROBE_TIMES
        .iter()
        .map(|&t| ProbeSample {
            t,
            m: traj.inertia_at(t),
        })
        .collect();

    if let Some(dir) = out_dir {
        std::fs::write(
            dir.join("trajectories").join(format!("{cell}.csv")),
            traj.to_csv(5),
        )?;
    }

    let record = RunRecord {
        cell: cell.to_string(),
        config_hash: config_hash.to_string(),
        controller_kind: choice.kind,
        m0,
        gain,
        probes,
        report,
    };
    Ok((record, keep_trajectory.then_some(traj)))
}

fn resolve_m0(cfg: &ExperimentConfig, kind: crate::netgen::NetworkKind, spectrum: &Spectrum) -> f64 {
    if cfg.use_reported_m0 {
        ControllerPreset::reported_m0_value(kind)
    } else {
        baseline_inertia(cfg.sim.damping, spectrum.lambda_max())
    }
}

fn scan_values(m_lo: f64, m_hi: f64) -> Vec<f64> {
    if (m_hi - m_lo).abs() < 1e-15 {
        return vec![m_lo];
    }
    (0..SCAN_POINTS)
        .map(|i| m_lo + (m_hi - m_lo) * i as f64 / (SCAN_POINTS - 1) as f64)
        .collect()
}

/// Convenience wrapper for single runs (the `simulate` subcommand).
pub fn run_single(
    cfg: &ExperimentConfig,
    network_index: usize,
    disturbance_index: usize,
    controller_index: usize,
    seed: u64,
) -> Result<(RunRecord, Trajectory)> {
    cfg.validate()?;
    let config_hash = cfg.hash();
    let spec = cfg
        .networks
        .get(network_index)
        .ok_or_else(|| Error::invalid("network index out of range"))?;
    let network = spec.build(seed)?;
    let lap = laplacian(&network, cfg.sim.coupling)?;
    let spectrum = decompose(&lap)?;
    let net = PreparedNetwork {
        network,
        laplacian: lap,
        spectrum,
    };
    let dist = cfg
        .disturbances
        .get(disturbance_index)
        .ok_or_else(|| Error::invalid("disturbance index out of range"))?;
    let ctrl = cfg
        .controllers
        .get(controller_index)
        .ok_or_else(|| Error::invalid("controller index out of range"))?;
    let cell = cell_id(&net, dist.label(), &ctrl.name);
    let (record, traj) = run_cell(cfg, &net, dist, ctrl, &cell, &config_hash, None, true)?;
    Ok((record, traj.expect("trajectory kept for single runs")))
}
