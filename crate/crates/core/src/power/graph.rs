use std::collections::HashSet;

use super::{PowerAssignment, PowerSource};
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::relations::RelationSet;

fn resolved_edges(edges: &RelationSet, e: &EmbeddingSet) -> Result<Vec<(usize, usize)>> {
    let mut resolved: Vec<(usize, usize)> = edges.resolve(e).pairs.into_iter().collect();
    if resolved.is_empty() {
        return Err(Error::NoResolvableEdges);
    }
    resolved.sort_unstable();
    Ok(resolved)
}

/// Undirected degree with each unordered pair counted once. Entities without
/// edges get the smallest positive degree.
pub fn degree_raw(edges: &RelationSet, e: &EmbeddingSet) -> Result<Vec<f64>> {
    let resolved = resolved_edges(edges, e)?;
    let undirected: HashSet<(usize, usize)> =
        resolved.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let mut degree = vec![0usize; e.len()];
    for (a, b) in undirected {
        degree[a] += 1;
        degree[b] += 1;
    }
    let min_positive = degree.iter().copied().filter(|&d| d > 0).min().unwrap_or(1);
    Ok(degree
        .into_iter()
        .map(|d| if d == 0 { min_positive } else { d } as f64)
        .collect())
}

pub fn degree_power(edges: &RelationSet, e: &EmbeddingSet) -> Result<PowerAssignment> {
    PowerAssignment::from_raw(degree_raw(edges, e)?, PowerSource::Degree)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankConfig {
    pub damping: f64,
    pub max_iters: usize,
    /// Stop once the l1 change between iterates drops below this.
    pub tol: f64,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        PageRankConfig {
            damping: 0.85,
            max_iters: 100,
            tol: 1e-10,
        }
    }
}

/// Result of a power iteration: the ranks plus the l1 residual per iteration.
#[derive(Debug, Clone)]
pub struct PageRankRun {
    pub ranks: Vec<f64>,
    pub residuals: Vec<f64>,
}

/// PageRank over the directed relation graph, teleporting uniformly over all
/// entities and spreading dangling mass uniformly.
pub fn pagerank_raw(
    edges: &RelationSet,
    e: &EmbeddingSet,
    cfg: PageRankConfig,
) -> Result<PageRankRun> {
    if !(0.0..=1.0).contains(&cfg.damping) {
        return Err(Error::InvalidParameter(format!(
            "damping must lie in [0, 1], got {}",
            cfg.damping
        )));
    }
    let resolved = resolved_edges(edges, e)?;
    let n = e.len();
    let mut out_degree = vec![0usize; n];
    let mut incoming: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(src, dst) in &resolved {
        out_degree[src] += 1;
        incoming[dst].push(src);
    }
    let uniform = 1.0 / n as f64;
    let mut ranks = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut residuals = Vec::new();
    for _ in 0..cfg.max_iters {
        let dangling: f64 = (0..n).filter(|&i| out_degree[i] == 0).map(|i| ranks[i]).sum();
        let base = (1.0 - cfg.damping) * uniform + cfg.damping * dangling * uniform;
        for (i, slot) in next.iter_mut().enumerate() {
            let inflow: f64 = incoming[i]
                .iter()
                .map(|&j| ranks[j] / out_degree[j] as f64)
                .sum();
            *slot = base + cfg.damping * inflow;
        }
        let residual: f64 = ranks.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut ranks, &mut next);
        residuals.push(residual);
        if residual < cfg.tol {
            break;
        }
    }
    Ok(PageRankRun { ranks, residuals })
}

pub fn pagerank_power(
    edges: &RelationSet,
    e: &EmbeddingSet,
    cfg: PageRankConfig,
) -> Result<PowerAssignment> {
    PowerAssignment::from_raw(pagerank_raw(edges, e, cfg)?.ranks, PowerSource::PageRank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn emb(labels: &[&str]) -> EmbeddingSet {
        EmbeddingSet::new(
            labels.iter().map(|s| s.to_string()).collect(),
            labels.iter().enumerate().map(|(i, _)| vec![i as f64]).collect(),
        )
        .unwrap()
    }

    #[test]
    fn star_degrees() {
        let e = emb(&["c", "x", "y", "z"]);
        let g = RelationSet::from_pairs("t", [("x", "c"), ("y", "c"), ("z", "c"), ("c", "x")]);
        assert_eq!(degree_raw(&g, &e).unwrap(), vec![3.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn path_degrees_and_isolated() {
        let e = emb(&["a", "b", "c", "lonely"]);
        let g = RelationSet::from_pairs("t", [("a", "b"), ("b", "c")]);
        let p = degree_power(&g, &e).unwrap();
        assert!(p.get(1) > p.get(0));
        assert_eq!(p.get(0), p.get(2));
        assert_eq!(p.get(3), 1.0);
        assert!(p.powers().iter().all(|&x| x >= 1.0));
    }

    #[test]
    fn empty_graph_errors() {
        let e = emb(&["a"]);
        assert!(matches!(
            degree_power(&RelationSet::new("t"), &e),
            Err(Error::NoResolvableEdges)
        ));
        assert!(matches!(
            pagerank_power(&RelationSet::new("t"), &e, PageRankConfig::default()),
            Err(Error::NoResolvableEdges)
        ));
    }

    #[test]
    fn two_cycle_is_uniform() {
        let e = emb(&["a", "b"]);
        let g = RelationSet::from_pairs("t", [("a", "b"), ("b", "a")]);
        let run = pagerank_raw(&g, &e, PageRankConfig::default()).unwrap();
        assert!((run.ranks[0] - 0.5).abs() < 1e-12 && (run.ranks[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn chain_ranks_increase_downstream() {
        // Fixed point by hand for a -> b -> c, damping 0.85, c dangling:
        // r_a = t, r_b = t + 0.85 r_a, r_c = t + 0.85 r_b with
        // t = 0.05 + 0.85 r_c / 3; solving gives r_a = 1/5.4225 ~ 0.184417, r_b = 1.85 r_a, r_c = 2.5725 r_a.
        let e = emb(&["a", "b", "c"]);
        let g = RelationSet::from_pairs("t", [("a", "b"), ("b", "c")]);
        let run = pagerank_raw(&g, &e, PageRankConfig::default()).unwrap();
        let r = &run.ranks;
        assert!(r[2] > r[1] && r[1] > r[0]);
        let t = r[0];
        assert!((r[1] - (t + 0.85 * r[0])).abs() < 1e-9);
        assert!((r[2] - (t + 0.85 * r[1])).abs() < 1e-9);
        assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        assert!((r[0] - 0.184417).abs() < 1e-5);
    }

    #[test]
    fn residuals_shrink() {
        let labels: Vec<String> = (0..30).map(|i| format!("n{i}")).collect();
        let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let e = emb(&refs);
        let mut g = RelationSet::new("t");
        for i in 0..30 {
            g.insert(format!("n{i}"), format!("n{}", (i * 7 + 3) % 30));
            g.insert(format!("n{i}"), format!("n{}", (i * 11 + 5) % 13));
        }
        let run = pagerank_raw(&g, &e, PageRankConfig::default()).unwrap();
        assert!((run.ranks.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        for w in run.residuals.windows(2).skip(1) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-15);
        }
    }
}
