//! Accuracy broken down by edge length, child power and tree level.

use std::collections::BTreeMap;

use serde::Serialize;

use super::EdgeHits;
use crate::error::{Error, Result};
use crate::power::{smooth, PowerAssignment};
use crate::relations::ResolvedRelations;
use crate::tree::{node_of, Arborescence};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    /// Bucket position: mid percentile (0..100) for percentile curves, the
    /// level itself for level curves.
    pub x: f64,
    /// Mean of the bucketing key over the bucket's edges.
    pub mean_key: f64,
    pub hits: EdgeHits,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AccuracyCurve {
    pub key: &'static str,
    pub points: Vec<CurvePoint>,
}

impl AccuracyCurve {
    pub fn directed(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.hits.directed_acc()).collect()
    }

    pub fn undirected(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.hits.undirected_acc()).collect()
    }

    /// Moving-average smoothed directed accuracies (presentational only).
    pub fn smoothed_directed(&self, window: usize) -> Vec<f64> {
        smooth(&self.directed(), window)
    }

    pub fn smoothed_undirected(&self, window: usize) -> Vec<f64> {
        smooth(&self.undirected(), window)
    }

    /// Sum of all bucket counts; equals the global hit counts.
    pub fn total(&self) -> EdgeHits {
        let mut t = EdgeHits::default();
        for p in &self.points {
            t.add(&p.hits);
        }
        t
    }
}

/// Real edges with a per-edge key, sorted ascending by key then child index.
fn keyed_edges(tree: &Arborescence, key: impl Fn(usize) -> f64) -> Result<Vec<(f64, usize, usize)>> {
    let mut edges: Vec<(f64, usize, usize)> =
        tree.real_edges().map(|(c, p)| (key(c), c, p)).collect();
    if edges.is_empty() {
        return Err(Error::NoScorableEdges);
    }
    edges.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(edges)
}

/// Equal-count buckets over sorted positions. With more buckets than edges,
/// each edge gets its own bucket.
fn percentile_curve(
    key_name: &'static str,
    edges: &[(f64, usize, usize)],
    truth: &ResolvedRelations,
    n_buckets: usize,
) -> Result<AccuracyCurve> {
    if n_buckets == 0 {
        return Err(Error::InvalidParameter("bucket count must be positive".into()));
    }
    let m = edges.len();
    let b = n_buckets.min(m);
    let points = (0..b)
        .map(|i| {
            let (lo, hi) = (i * m / b, (i + 1) * m / b);
            let mut hits = EdgeHits::default();
            let mut key_sum = 0.0;
            for &(k, c, p) in &edges[lo..hi] {
                hits.record(c, p, truth);
                key_sum += k;
            }
            CurvePoint {
                x: 100.0 * (lo + hi) as f64 / (2 * m) as f64,
                mean_key: key_sum / (hi - lo) as f64,
                hits,
            }
        })
        .collect();
    Ok(AccuracyCurve {
        key: key_name,
        points,
    })
}

/// Accuracy by edge-length percentile; short edges come first.
pub fn accuracy_by_edge_length(
    tree: &Arborescence,
    truth: &ResolvedRelations,
    n_buckets: usize,
) -> Result<AccuracyCurve> {
    let edges = keyed_edges(tree, |c| tree.edge_length(node_of(c)))?;
    percentile_curve("edge_length", &edges, truth, n_buckets)
}

/// Accuracy by child power percentile; low power comes first.
pub fn accuracy_by_node_power(
    tree: &Arborescence,
    truth: &ResolvedRelations,
    powers: &PowerAssignment,
    n_buckets: usize,
) -> Result<AccuracyCurve> {
    if powers.len() != tree.n_entities() {
        return Err(Error::SizeMismatch {
            what: "powers",
            expected: tree.n_entities(),
            found: powers.len(),
        });
    }
    let edges = keyed_edges(tree, |c| powers.get(c))?;
    percentile_curve("node_power", &edges, truth, n_buckets)
}

/// Accuracy grouped by the level of the child node.
pub fn accuracy_by_tree_level(tree: &Arborescence, truth: &ResolvedRelations) -> Result<AccuracyCurve> {
    let mut by_level: BTreeMap<usize, EdgeHits> = BTreeMap::new();
    for (c, p) in tree.real_edges() {
        by_level.entry(tree.level(node_of(c))).or_default().record(c, p, truth);
    }
    if by_level.is_empty() {
        return Err(Error::NoScorableEdges);
    }
    let points = by_level
        .into_iter()
        .map(|(level, hits)| CurvePoint {
            x: level as f64,
            mean_key: level as f64,
            hits,
        })
        .collect();
    Ok(AccuracyCurve {
        key: "level",
        points,
    })
}
