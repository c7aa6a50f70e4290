// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! The group-by-sum experiment pipeline: CSV ingestion, exact group sums,
//! calibration, per-record losses, error summaries and report files.

pub mod calibrate;
pub mod data;
pub mod experiment;
pub mod report;
pub mod synth;

pub use calibrate::{calibrate, calibration_sd, free_parameter, MechanismTemplate};
pub use data::{exact_sum, groupby_sum, load_csv, load_csv_reader, Dataset, GroupSum, Record};
pub use experiment::{
    are, are_quintiles, default_sd_grid, default_thresholds, group_stream_id, percentile, privacy_loss_cdf,
    run_experiment, run_experiment_fixed_draw, sd_curve, CdfPoint, ExperimentConfig, ExperimentReport, GroupResult,
    QuintileSummary, RecordLoss, SdPoint,
};
pub use report::write_report;
pub use synth::{generate as synth_generate, SynthProfile, SynthTable};
