// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Synthetic, non-confidential stand-ins for the establishment and cattle
//! datasets.
//!
//! Values are lognormal with the target median and interquartile spread,
//! plus a small fraction of log-uniform outliers reaching the target
//! maximum. Everything is rounded to whole units and clamped to the target
//! range.

use crate::distributions::RngStream;
use crate::error::{invalid, Result};
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::str::FromStr;

/// Shape of one synthetic value column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnShape {
    pub name: &'static str,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    /// Values are rounded to a multiple of this.
    pub unit: f64,
}

impl ColumnShape {
    fn log_sd(&self) -> f64 {
        // Interquartile range of a standard normal is 1.349.
        (self.q3 / self.q1).ln() / 1.349
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SynthProfile {
    /// Establishments keyed by industry code and county with employment
    /// and payroll columns.
    Cbp,
    /// Operations keyed by state with a cattle count.
    Cattle,
}

impl FromStr for SynthProfile {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cbp" => Ok(Self::Cbp),
            "cattle" => Ok(Self::Cattle),
            other => Err(invalid(format!("unknown profile {other:?}, expected cbp or cattle"))),
        }
    }
}

const CBP_COLUMNS: [ColumnShape; 3] = [
    ColumnShape {
        name: "EMP",
        min: 0.0,
        q1: 1.0,
        median: 2.0,
        q3: 9.0,
        max: 19_589.0,
        unit: 1.0,
    },
    ColumnShape {
        name: "PAYQTR1",
        min: 0.0,
        q1: 7.0,
        median: 25.0,
        q3: 93.0,
        max: 402_324.0,
        unit: 1.0,
    },
    ColumnShape {
        name: "PAYANN",
        min: 0.0,
        q1: 30.0,
        median: 106.0,
        q3: 388.0,
        max: 1_553_359.0,
        unit: 1.0,
    },
];

const CATTLE_COLUMNS: [ColumnShape; 1] = [ColumnShape {
    name: "CATTLE",
    min: 100.0,
    q1: 3_100.0,
    median: 10_200.0,
    q3: 26_000.0,
    max: 1_341_000.0,
    unit: 100.0,
}];

const OUTLIER_RATE: f64 = 2e-4;
const CBP_INDUSTRIES: usize = 73;
const CBP_COUNTIES: usize = 15;
const CATTLE_STATES: usize = 43;

impl SynthProfile {
    pub fn key_columns(&self) -> &'static [&'static str] {
        match self {
            Self::Cbp => &["NAICS3", "COUNTY"],
            Self::Cattle => &["STATE"],
        }
    }

    pub fn value_columns(&self) -> &'static [ColumnShape] {
        match self {
            Self::Cbp => &CBP_COLUMNS,
            Self::Cattle => &CATTLE_COLUMNS,
        }
    }

    /// Record count of the original dataset.
    pub fn default_rows(&self) -> usize {
        match self {
            Self::Cbp => 323_402,
            Self::Cattle => 5_926,
        }
    }
}

/// A generated table with string cells.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl SynthTable {
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn draw_value(shape: &ColumnShape, z: f64, rng: &mut RngStream) -> f64 {
    let raw = if rng.uniform() < OUTLIER_RATE {
        let lo = shape.q3.ln();
        (lo + rng.uniform() * (shape.max.ln() - lo)).exp()
    } else {
        (shape.median.ln() + shape.log_sd() * z).exp()
    };
    ((raw / shape.unit).round() * shape.unit).clamp(shape.min, shape.max)
}

/// Generate `rows` records. The payroll columns share the employment
/// column's normal draw so the three move together, as they do in real
/// establishment data.
pub fn generate(profile: SynthProfile, rows: usize, seed: u64) -> SynthTable {
    let mut rng = RngStream::new(seed, 0);
    let mut columns: Vec<String> = vec!["ID".to_string()];
    columns.extend(profile.key_columns().iter().map(|s| s.to_string()));
    columns.extend(profile.value_columns().iter().map(|c| c.name.to_string()));
    let mut out = Vec::with_capacity(rows);
    for id in 1..=rows {
        let mut row = vec![id.to_string()];
        match profile {
            SynthProfile::Cbp => {
                // Industry frequencies are skewed; counties are uniform.
                let u = rng.uniform();
                let industry = ((u * u) * CBP_INDUSTRIES as f64) as usize;
                let county = (rng.uniform() * CBP_COUNTIES as f64) as usize;
                row.push(format!("{}", 311 + industry));
                row.push(format!("{:03}", 1 + 2 * county));
            }
            SynthProfile::Cattle => {
                let state = (rng.uniform() * CATTLE_STATES as f64) as usize;
                row.push(format!("S{:02}", state + 1));
            }
        }
        let z = rng.std_normal();
        for shape in profile.value_columns() {
            let jitter = 0.3 * rng.std_normal();
            let v = draw_value(shape, (z + jitter) / (1.0f64 + 0.09).sqrt(), &mut rng);
            row.push(v.to_string());
        }
        out.push(row);
    }
    SynthTable { columns, rows: out }
}
