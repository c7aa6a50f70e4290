// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

//! Record datasets, CSV ingestion and exact group-by sums.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

/// One record: its group key tuple and a nonnegative value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub keys: Vec<String>,
    pub value: f64,
}

/// A multiset of records sharing one group-key schema.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Dataset {
    pub group_columns: Vec<String>,
    pub value_column: String,
    pub records: Vec<Record>,
}

impl Dataset {
    pub fn new(group_columns: Vec<String>, value_column: String) -> Self {
        Self {
            group_columns,
            value_column,
            records: Vec::new(),
        }
    }

    /// Append a record, checking key arity and the value.
    pub fn push(&mut self, keys: Vec<String>, value: f64) -> Result<()> {
        if keys.len() != self.group_columns.len() {
            return Err(Error::InvalidParameter(format!(
                "record has {} keys, schema has {}",
                keys.len(),
                self.group_columns.len()
            )));
        }
        if !(value >= 0.0) || !value.is_finite() {
            return Err(Error::NegativeValue {
                row: self.records.len() + 1,
                value,
            });
        }
        self.records.push(Record { keys, value });
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.records.iter().map(|r| r.value)
    }
}

/// Load a dataset from a CSV file with a header row.
///
/// Row numbers in errors count data rows from 1, excluding the header.
pub fn load_csv(path: impl AsRef<Path>, group_columns: &[String], value_column: &str) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    load_csv_reader(file, group_columns, value_column)
}

/// [`load_csv`] over any reader.
pub fn load_csv_reader(reader: impl Read, group_columns: &[String], value_column: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Parse {
            row: 0,
            column: name.to_string(),
            msg: "column not found in header".to_string(),
        })
    };
    let key_idx: Vec<usize> = group_columns.iter().map(|c| find(c)).collect::<Result<_>>()?;
    let value_idx = find(value_column)?;

    let mut ds = Dataset::new(group_columns.to_vec(), value_column.to_string());
    for (i, rec) in rdr.records().enumerate() {
        let row = i + 1;
        let rec = rec?;
        let field = |idx: usize, name: &str| {
            rec.get(idx).ok_or_else(|| Error::Parse {
                row,
                column: name.to_string(),
                msg: "missing field".to_string(),
            })
        };
        let raw = field(value_idx, value_column)?;
        let value: f64 = raw.parse().map_err(|_| Error::Parse {
            row,
            column: value_column.to_string(),
            msg: format!("not a number: {raw:?}"),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                row,
                column: value_column.to_string(),
                msg: format!("not a finite number: {raw:?}"),
            });
        }
        if value < 0.0 {
            return Err(Error::NegativeValue { row, value });
        }
        let keys = key_idx
            .iter()
            .zip(group_columns)
            .map(|(&idx, name)| field(idx, name).map(str::to_string))
            .collect::<Result<Vec<_>>>()?;
        ds.records.push(Record { keys, value });
    }
    Ok(ds)
}

/// Correctly rounded sum of `xs` (Shewchuk partials with a final
/// round-half-even correction), so the result does not depend on order.
pub fn exact_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for mut x in xs {
        let mut i = 0;
        for j in 0..partials.len() {
            let mut y = partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        partials.truncate(i);
        partials.push(x);
    }
    let mut n = partials.len();
    if n == 0 {
        return 0.0;
    }
    n -= 1;
    let mut hi = partials[n];
    let mut lo = 0.0;
    while n > 0 {
        let x = hi;
        n -= 1;
        let y = partials[n];
        hi = x + y;
        lo = y - (hi - x);
        if lo != 0.0 {
            break;
        }
    }
    if n > 0 && ((lo < 0.0 && partials[n - 1] < 0.0) || (lo > 0.0 && partials[n - 1] > 0.0)) {
        let y = lo * 2.0;
        let x = hi + y;
        if y == x - hi {
            hi = x;
        }
    }
    hi
}

/// A group's key tuple, record count and exact sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSum {
    pub keys: Vec<String>,
    pub count: usize,
    pub sum: f64,
}

/// One row per distinct key tuple in lexicographic key order.
pub fn groupby_sum(ds: &Dataset) -> Vec<GroupSum> {
    let mut groups: BTreeMap<&[String], Vec<f64>> = BTreeMap::new();
    for r in &ds.records {
        groups.entry(r.keys.as_slice()).or_default().push(r.value);
    }
    groups
        .into_iter()
        .map(|(keys, values)| GroupSum {
            keys: keys.to_vec(),
            count: values.len(),
            sum: exact_sum(values),
        })
        .collect()
}
