//! Fine-grained clusters obtained by cutting long edges.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tree::{entity_of, Arborescence, ROOT};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    /// Entity whose parent edge was cut.
    pub root: usize,
    /// Member entities, sorted ascending (includes `root`).
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Forest {
    /// Length threshold; real edges strictly longer were cut. `None` when the
    /// tree has no real edges.
    pub threshold: Option<f64>,
    pub removed_edges: usize,
    /// Ordered by the insertion rank of each cluster root.
    pub clusters: Vec<Cluster>,
}

/// Percentile with linear interpolation between order statistics.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q / 100.0 * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Cuts every root edge plus every real edge longer than the given
/// percentile of real-edge lengths, and returns the remaining components.
///
/// The artificial root ends up alone and is not reported, so
/// `clusters.len() == removed_edges`.
pub fn extract_subtrees(tree: &Arborescence, cutoff: f64) -> Result<Forest> {
    if !(cutoff > 0.0 && cutoff <= 100.0) {
        return Err(Error::InvalidParameter(format!(
            "percentile must lie in (0, 100], got {cutoff}"
        )));
    }
    let mut lengths: Vec<f64> = (1..tree.n_nodes())
        .filter(|&n| tree.parent(n) != Some(ROOT))
        .map(|n| tree.edge_length(n))
        .collect();
    lengths.sort_by(f64::total_cmp);
    let threshold = (!lengths.is_empty()).then(|| percentile(&lengths, cutoff));

    let mut by_rank: Vec<usize> = (1..tree.n_nodes()).collect();
    by_rank.sort_by_key(|&n| tree.insertion_rank(n));

    let mut cluster_of = vec![usize::MAX; tree.n_nodes()];
    let mut clusters: Vec<Cluster> = Vec::new();
    for node in by_rank {
        let parent = tree.parent(node).unwrap();
        let cut = parent == ROOT || threshold.is_some_and(|t| tree.edge_length(node) > t);
        let entity = entity_of(node).unwrap();
        if cut {
            cluster_of[node] = clusters.len();
            clusters.push(Cluster {
                root: entity,
                members: vec![entity],
            });
        } else {
            let c = cluster_of[parent];
            cluster_of[node] = c;
            clusters[c].members.push(entity);
        }
    }
    for c in &mut clusters {
        c.members.sort_unstable();
    }
    Ok(Forest {
        threshold,
        removed_edges: clusters.len(),
        clusters,
    })
}
