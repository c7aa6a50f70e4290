// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Report files written by the experiment pipeline.
//!
//! Numbers use Rust's shortest round-trip formatting; undefined values are
//! written as `NA`. Row order is fixed (groups and records by key), so equal
//! reports give byte-identical files.

use super::experiment::ExperimentReport;
use crate::error::Result;
use serde_json::json;
use std::path::Path;

pub const GROUPS_CSV: &str = "groups.csv";
pub const RECORD_LOSSES_CSV: &str = "record_losses.csv";
pub const LOSS_CDF_CSV: &str = "loss_cdf.csv";
pub const ARE_QUINTILES_CSV: &str = "are_quintiles.csv";
pub const SD_CURVE_CSV: &str = "sd_curve.csv";
pub const REPORT_JSON: &str = "report.json";

/// All CSV files written by [`write_report`].
pub const CSV_FILES: [&str; 5] = [GROUPS_CSV, RECORD_LOSSES_CSV, LOSS_CDF_CSV, ARE_QUINTILES_CSV, SD_CURVE_CSV];

fn num(x: f64) -> String {
    x.to_string()
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), num)
}

/// Write the report's CSV files and `report.json` into `dir`, creating it if
/// needed.
pub fn write_report(report: &ExperimentReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let cfg = &report.config;
    let loss_col = format!("{}_loss", report.policy.flavor.as_str());

    let mut w = csv::Writer::from_path(dir.join(GROUPS_CSV))?;
    let mut header = cfg.group_columns.clone();
    header.extend(["count", "true_sum", "noisy_sum", "are"].map(String::from));
    w.write_record(&header)?;
    for g in &report.groups {
        let mut row = g.keys.clone();
        row.extend([g.count.to_string(), num(g.true_sum), num(g.noisy_sum), opt(g.are)]);
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(RECORD_LOSSES_CSV))?;
    let mut header = cfg.group_columns.clone();
    header.extend(["value".to_string(), loss_col]);
    w.write_record(&header)?;
    for r in &report.records {
        let mut row = r.keys.clone();
        row.extend([num(r.value), num(r.loss)]);
        w.write_record(&row)?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(LOSS_CDF_CSV))?;
    w.write_record(["threshold", "fraction"])?;
    for p in &report.loss_cdf {
        w.write_record([num(p.threshold), num(p.fraction)])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(ARE_QUINTILES_CSV))?;
    w.write_record([
        "quintile",
        "groups",
        "excluded",
        "min_true_sum",
        "max_true_sum",
        "are_p25",
        "are_p50",
        "are_p75",
    ])?;
    for q in &report.quintiles {
        w.write_record([
            q.quintile.to_string(),
            q.groups.to_string(),
            q.excluded.to_string(),
            opt(q.min_true_sum),
            opt(q.max_true_sum),
            opt(q.are_p25),
            opt(q.are_p50),
            opt(q.are_p75),
        ])?;
    }
    w.flush()?;

    let mut w = csv::Writer::from_path(dir.join(SD_CURVE_CSV))?;
    w.write_record(["q", "sd"])?;
    for p in &report.sd_curve {
        w.write_record([num(p.q), num(p.sd)])?;
    }
    w.flush()?;

    let meta = json!({
        "mechanism": cfg.mechanism,
        "loss_flavor": cfg.loss_flavor,
        "policy": report.policy,
        "seed": cfg.seed,
        "clamp_output": cfg.clamp_output,
        "group_columns": cfg.group_columns,
        "value_column": cfg.value_column,
        "records": report.records.len(),
        "groups": report.groups.len(),
        "excluded_groups": report.excluded(),
        "files": CSV_FILES,
    });
    std::fs::write(dir.join(REPORT_JSON), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}
