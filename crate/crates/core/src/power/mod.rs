//! Entity power: the per-entity importance signal that fixes insertion order
//! and feeds the power term of the parent score.
//!
//! Four sources are provided: Zipf-induced frequency from rank order,
//! PCA-induced norm, vertex degree and PageRank. An external per-label table
//! can also be wrapped. Every provider goes through
//! [`PowerAssignment::from_raw`], which divides by the minimum so the smallest
//! power is exactly 1 and `ln(power) >= 0`.

mod diagnostics;
mod graph;
mod pca;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use diagnostics::{
    hypernym_rank_scatter, norm_rank_curve, power_rank_curve, smooth, spearman, PowerRankCurve,
    RankScatter,
};
pub use graph::{degree_power, degree_raw, pagerank_power, pagerank_raw, PageRankConfig, PageRankRun};
pub use pca::{debias_embedding, fit_pca, pca_power, pca_power_raw, PcaModel};

use crate::error::{Error, Result};

/// Where a power assignment came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerSource {
    Zipf,
    Pca,
    Degree,
    PageRank,
    External,
}

impl fmt::Display for PowerSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PowerSource::Zipf => "zipf",
            PowerSource::Pca => "pca",
            PowerSource::Degree => "degree",
            PowerSource::PageRank => "pagerank",
            PowerSource::External => "external",
        })
    }
}

/// Per-entity power, floor-rescaled so `min == 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAssignment {
    powers: Vec<f64>,
    source: PowerSource,
}

impl PowerAssignment {
    /// Rescales raw powers by `d / min(d)`.
    ///
    /// Raw values must be finite and nonnegative. Zeros are lifted to the
    /// smallest positive raw value first; if every value is zero all powers
    /// become 1.
    pub fn from_raw(raw: Vec<f64>, source: PowerSource) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        if let Some((index, &value)) = raw
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::InvalidPower { index, value });
        }
        let min_positive = raw
            .iter()
            .copied()
            .filter(|&v| v > 0.0)
            .fold(f64::INFINITY, f64::min);
        let powers = if min_positive.is_infinite() {
            vec![1.0; raw.len()]
        } else {
            raw.iter()
                .map(|&v| if v > 0.0 { v / min_positive } else { 1.0 })
                .collect()
        };
        Ok(PowerAssignment { powers, source })
    }

    pub fn powers(&self) -> &[f64] {
        &self.powers
    }

    pub fn get(&self, i: usize) -> f64 {
        self.powers[i]
    }

    pub fn len(&self) -> usize {
        self.powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.powers.is_empty()
    }

    pub fn source(&self) -> PowerSource {
        self.source
    }

    pub fn max(&self) -> f64 {
        self.powers.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Subset in the given entity order.
    pub fn select(&self, rows: &[usize]) -> Self {
        PowerAssignment {
            powers: rows.iter().map(|&i| self.powers[i]).collect(),
            source: self.source,
        }
    }
}

/// Raw Zipf frequencies `n / (r + 1)^exponent` for ranks `0..n`.
pub fn zipf_raw(n: usize, exponent: f64) -> Vec<f64> {
    (0..n)
        .map(|r| n as f64 / ((r + 1) as f64).powf(exponent))
        .collect()
}

/// Zipf-induced power with exponent 1; entities are assumed to be listed in
/// descending frequency order.
pub fn zipf_power(n: usize) -> Result<PowerAssignment> {
    zipf_power_with_exponent(n, 1.0)
}

pub fn zipf_power_with_exponent(n: usize, exponent: f64) -> Result<PowerAssignment> {
    if !(exponent > 0.0 && exponent.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "Zipf exponent must be positive, got {exponent}"
        )));
    }
    PowerAssignment::from_raw(zipf_raw(n, exponent), PowerSource::Zipf)
}
