//! Frequency-encoding diagnostics: smoothed norm and power curves against
//! frequency rank, and the hypernym/hyponym rank scatter.

use std::collections::{BTreeMap, HashMap};

use super::PowerAssignment;
use crate::distance::norm;
use crate::embedding::EmbeddingSet;
use crate::relations::RelationSet;

/// Centered moving average. The window spans `window / 2` points on each side
/// (so even windows cover `window + 1` points) and is clipped at the ends.
pub fn smooth(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..values.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(values.len());
            if hi - lo == 1 {
                values[i]
            } else {
                (prefix[hi] - prefix[lo]) / (hi - lo) as f64
            }
        })
        .collect()
}

/// `(rank, smoothed l2 norm)` for every row, rows taken in frequency order.
pub fn norm_rank_curve(e: &EmbeddingSet, window: usize) -> Vec<(usize, f64)> {
    let norms: Vec<f64> = e.rows().map(norm).collect();
    smooth(&norms, window).into_iter().enumerate().collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerRankCurve {
    pub points: Vec<(usize, f64)>,
    /// Spearman correlation between power and negated rank.
    pub spearman: f64,
}

pub fn power_rank_curve(p: &PowerAssignment, window: usize) -> PowerRankCurve {
    let neg_rank: Vec<f64> = (0..p.len()).map(|r| -(r as f64)).collect();
    PowerRankCurve {
        points: smooth(p.powers(), window).into_iter().enumerate().collect(),
        spearman: spearman(p.powers(), &neg_rank),
    }
}

/// Average ranks (1-based), ties sharing the mean of their positions.
fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "spearman inputs differ in length");
    let (rx, ry) = (average_ranks(x), average_ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankScatter {
    /// `(hyponym rank, min hypernym rank)`, sorted by hyponym rank.
    pub points: Vec<(usize, usize)>,
    /// Share of points with hypernym rank strictly below hyponym rank.
    pub fraction_below_diagonal: f64,
}

/// One point per hyponym: its rank against the smallest rank among its
/// hypernyms. Pairs with an unranked label are skipped.
pub fn hypernym_rank_scatter(edges: &RelationSet, rank_of: &HashMap<String, usize>) -> RankScatter {
    let mut best: BTreeMap<usize, usize> = BTreeMap::new();
    for (child, parent) in edges.iter() {
        let (Some(&c), Some(&p)) = (rank_of.get(child), rank_of.get(parent)) else {
            continue;
        };
        best.entry(c).and_modify(|m| *m = (*m).min(p)).or_insert(p);
    }
    let points: Vec<(usize, usize)> = best.into_iter().collect();
    let below = points.iter().filter(|(c, p)| p < c).count();
    let fraction_below_diagonal = if points.is_empty() {
        0.0
    } else {
        below as f64 / points.len() as f64
    };
    RankScatter {
        points,
        fraction_below_diagonal,
    }
}
