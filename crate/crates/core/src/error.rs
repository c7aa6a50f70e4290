// Copyright 2026 The prdp Authors
// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter set violates a type invariant.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series whose convergence condition does not hold.
    #[error("series diverges: {0}")]
    Divergence(String),

    /// A convergent series did not settle within the term budget.
    #[error("series not converged after {terms} terms")]
    Truncation { terms: usize },

    #[error("unsupported order {order} (maximum {max})")]
    UnsupportedOrder { order: u32, max: u32 },

    /// The operation is not defined for this noise family.
    #[error("operation not defined for family {0}")]
    Family(&'static str),

    #[error("moment does not exist: {0}")]
    NonexistentMoment(String),

    #[error("could not bracket a root: {0}")]
    Bracketing(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at row {row}, column {column}: {msg}")]
    Parse {
        row: usize,
        column: String,
        msg: String,
    },

    #[error("negative value at row {row}: {value}")]
    NegativeValue { row: usize, value: f64 },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
