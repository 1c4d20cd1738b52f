//! Table and summary emission from run records.
//!
//! Three CSVs mirror the experiment protocol: the inertia quantization
//! table (M₀, gain and M(t) at the probe times per run), the
//! constant-vs-adaptive comparison table, and the per-network summary of
//! average reduction rates. A JSON summary carries machine-readable totals
//! plus discrepancy findings (negative reductions, threshold failures),
//! each traceable through the config hash.

use std::path::Path;

use serde_json::json;

use crate::error::Result;
use crate::xplab::csv::{fmt_f64, CsvTable};
use crate::xplab::runner::{ComparisonRow, MatrixOutcome, RunRecord};

/// Inertia quantization table: one row per run.
pub fn emit_inertia_table(records: &[RunRecord], config_hash: &str) -> Result<CsvTable> {
    let mut header = vec![
        "network".to_string(),
        "disturbance".to_string(),
        "controller".to_string(),
        "seed".to_string(),
        "M0".to_string(),
        "gain".to_string(),
    ];
    for t in crate::xplab::runner::PROBE_TIMES {
        header.push(format!("M_{t}s"));
    }
    header.push("M_min".to_string());
    header.push("M_max".to_string());

    let mut table = CsvTable::new(header).with_comment(format!("config={config_hash}"));
    for r in records {
        let mut row = vec![
            r.report.network.label(),
            r.report.disturbance.clone(),
            r.report.controller.clone(),
            r.report.network.seed.to_string(),
            fmt_f64(r.m0),
            fmt_f64(r.gain),
        ];
        for p in &r.probes {
            row.push(p.m.map(fmt_f64).unwrap_or_default());
        }
        row.push(fmt_f64(r.report.m_range.0));
        row.push(fmt_f64(r.report.m_range.1));
        table.push_row(row);
    }
    Ok(table)
}

/// Constant-vs-adaptive comparison table: one row per adaptive run.
pub fn emit_comparison_table(comparisons: &[ComparisonRow], config_hash: &str) -> Result<CsvTable> {
    let header = [
        "network",
        "disturbance",
        "controller",
        "seed",
        "H_const",
        "H_adapt",
        "H_reduction_pct",
        "tau_const",
        "tau_adapt",
        "tau_reduction_pct",
        "max_real_part_const",
        "max_real_part_adapt",
    ]
    .map(String::from)
    .to_vec();
    let mut table = CsvTable::new(header).with_comment(format!("config={config_hash}"));
    for c in comparisons {
        table.push_row(vec![
            c.network.clone(),
            c.disturbance.clone(),
            c.controller.clone(),
            c.seed.to_string(),
            fmt_f64(c.h_const),
            fmt_f64(c.h_adapt),
            fmt_f64(c.h_reduction * 100.0),
            fmt_f64(c.tau_const),
            fmt_f64(c.tau_adapt),
            fmt_f64(c.tau_reduction * 100.0),
            fmt_f64(c.max_real_part_const),
            fmt_f64(c.max_real_part_adapt),
        ]);
    }
    Ok(table)
}

/// Per-network averages across disturbances and seeds.
pub struct SummaryRow {
    pub network: String,
    pub cells: usize,
    pub avg_h_reduction: f64,
    pub avg_tau_reduction: f64,
    pub negative_h: usize,
    pub negative_tau: usize,
}

pub fn summarize(comparisons: &[ComparisonRow]) -> Vec<SummaryRow> {
    let mut networks: Vec<String> = comparisons.iter().map(|c| c.network.clone()).collect();
    networks.sort();
    networks.dedup();
    networks
        .into_iter()
        .map(|network| {
            let rows: Vec<&ComparisonRow> =
                comparisons.iter().filter(|c| c.network == network).collect();
            let n = rows.len() as f64;
            SummaryRow {
                network,
                cells: rows.len(),
                avg_h_reduction: rows.iter().map(|c| c.h_reduction).sum::<f64>() / n,
                avg_tau_reduction: rows.iter().map(|c| c.tau_reduction).sum::<f64>() / n,
                negative_h: rows.iter().filter(|c| c.h_reduction < 0.0).count(),
                negative_tau: rows.iter().filter(|c| c.tau_reduction < 0.0).count(),
            }
        })
        .collect()
}

/// Summary CSV: per-network average reduction rates; negative counts flag
/// cells where the adaptive arm did worse.
pub fn emit_summary_table(comparisons: &[ComparisonRow], config_hash: &str) -> Result<CsvTable> {
    let header = [
        "network",
        "cells",
        "avg_H_reduction_pct",
        "avg_tau_reduction_pct",
        "negative_H_cells",
        "negative_tau_cells",
    ]
    .map(String::from)
    .to_vec();
    let mut table = CsvTable::new(header).with_comment(format!("config={config_hash}"));
    for s in summarize(comparisons) {
        table.push_row(vec![
            s.network,
            s.cells.to_string(),
            fmt_f64(s.avg_h_reduction * 100.0),
            fmt_f64(s.avg_tau_reduction * 100.0),
            s.negative_h.to_string(),
            s.negative_tau.to_string(),
        ]);
    }
    Ok(table)
}

/// Machine-readable summary with discrepancy findings.
pub fn emit_summary_json(outcome: &MatrixOutcome) -> serde_json::Value {
    let mut findings: Vec<String> = Vec::new();
    for c in &outcome.comparisons {
        if c.h_reduction < 0.0 {
            findings.push(format!(
                "discrepancy: adaptive H(T) increased by {:.2}% on {} / {} / seed {} (config {})",
                -c.h_reduction * 100.0,
                c.network,
                c.disturbance,
                c.seed,
                outcome.config_hash
            ));
        }
        if c.tau_reduction < 0.0 {
            findings.push(format!(
                "discrepancy: adaptive relaxation time grew by {:.2}% on {} / {} / seed {} (config {})",
                -c.tau_reduction * 100.0,
                c.network,
                c.disturbance,
                c.seed,
                outcome.config_hash
            ));
        }
    }
    for r in &outcome.records {
        if !r.report.stability_pass {
            findings.push(format!(
                "finding: {} has max characteristic-root real part {:.4} s^-1, above the configured threshold; strictly stable but the blanket bound is topology-limited",
                r.cell, r.report.max_real_part
            ));
        }
    }

    let summary_rows: Vec<serde_json::Value> = summarize(&outcome.comparisons)
        .into_iter()
        .map(|s| {
            json!({
                "network": s.network,
                "cells": s.cells,
                "avg_H_reduction_pct": s.avg_h_reduction * 100.0,
                "avg_tau_reduction_pct": s.avg_tau_reduction * 100.0,
                "negative_H_cells": s.negative_h,
                "negative_tau_cells": s.negative_tau,
            })
        })
        .collect();

    json!({
        "config_hash": outcome.config_hash,
        "cells_expected": outcome.expected_cells,
        "cells_completed": outcome.records.len(),
        "failures": outcome.failures,
        "networks": summary_rows,
        "findings": findings,
    })
}

/// Write every matrix artifact below `out_dir`: runs/*.json and
/// tables/{inertia,comparison,summary}.csv plus summary.json.
pub fn write_artifacts(outcome: &MatrixOutcome, out_dir: &Path) -> Result<()> {
    let runs = out_dir.join("runs");
    let tables = out_dir.join("tables");
    std::fs::create_dir_all(&runs)?;
    std::fs::create_dir_all(&tables)?;

    for r in &outcome.records {
        let path = runs.join(format!("{}.json", r.cell));
        std::fs::write(path, serde_json::to_string_pretty(r)?)?;
    }

    std::fs::write(
        tables.join("inertia.csv"),
        emit_inertia_table(&outcome.records, &outcome.config_hash)?.emit()?,
    )?;
    std::fs::write(
        tables.join("comparison.csv"),
        emit_comparison_table(&outcome.comparisons, &outcome.config_hash)?.emit()?,
    )?;
    std::fs::write(
        tables.join("summary.csv"),
        emit_summary_table(&outcome.comparisons, &outcome.config_hash)?.emit()?,
    )?;
    std::fs::write(
        out_dir.join("summary.json"),
        serde_json::to_string_pretty(&emit_summary_json(outcome))?,
    )?;
    Ok(())
}

/// Rebuild records from stored `runs/*.json` (the `report` subcommand).
pub fn load_records(out_dir: &Path) -> Result<Vec<RunRecord>> {
    let runs = out_dir.join("runs");
    let mut records = Vec::new();
    for entry in std::fs::read_dir(&runs)? {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("json") {
            let text = std::fs::read_to_string(&path)?;
            records.push(serde_json::from_str::<RunRecord>(&text)?);
        }
    }
    records.sort_by(|a, b| a.cell.cmp(&b.cell));
    Ok(records)
}
