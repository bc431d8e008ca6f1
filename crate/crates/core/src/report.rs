//! Error metrics between exact and asymptotic series on a common grid.

use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sites excluded at each end for bulk metrics: `⌈N/20⌉`.
pub fn bulk_margin(n: usize) -> usize {
    n.div_ceil(20)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub quantity: String,
    pub grid: Vec<f64>,
    pub exact: Vec<f64>,
    pub wkb: Vec<f64>,
    pub sup_error: f64,
    pub mean_abs_error: f64,
    pub bulk_sup_error: f64,
    pub bulk_margin: usize,
    pub runtime_seconds: f64,
}

impl ComparisonReport {
    /// Compares two series sampled on `grid`; the bulk excludes
    /// `bulk_margin(len)` points at each end.
    pub fn new(
        quantity: impl Into<String>,
        grid: Vec<f64>,
        exact: Vec<f64>,
        wkb: Vec<f64>,
        runtime: Duration,
    ) -> Result<Self> {
        let n = grid.len();
        if exact.len() != n || wkb.len() != n || n == 0 {
            return Err(Error::InvalidInput(format!(
                "series lengths differ or are empty: grid {n}, exact {}, wkb {}",
                exact.len(),
                wkb.len()
            )));
        }
        let err: Vec<f64> = exact.iter().zip(&wkb).map(|(a, b)| (a - b).abs()).collect();
        let margin = bulk_margin(n);
        let bulk = if n > 2 * margin {
            &err[margin..n - margin]
        } else {
            &err[..]
        };
        Ok(Self {
            quantity: quantity.into(),
            sup_error: err.iter().copied().fold(0.0, f64::max),
            mean_abs_error: err.iter().sum::<f64>() / n as f64,
            bulk_sup_error: bulk.iter().copied().fold(0.0, f64::max),
            bulk_margin: margin,
            runtime_seconds: runtime.as_secs_f64(),
            grid,
            exact,
            wkb,
        })
    }
}
