//! Edge-accuracy metrics, bucketed diagnostic curves and the `p` sweep.

mod curves;
mod sweep;

pub use curves::{
    accuracy_by_edge_length, accuracy_by_node_power, accuracy_by_tree_level, AccuracyCurve,
    CurvePoint,
};
pub use sweep::{default_p_grid, sweep_p, LcaInputs, Method, SweepRow, SweepTable};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relations::ResolvedRelations;
use crate::tree::Arborescence;

/// Hit counts for one set of tree edges.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct EdgeHits {
    pub edges: usize,
    pub directed: usize,
    pub reversed: usize,
    pub undirected: usize,
}

impl EdgeHits {
    pub(crate) fn record(&mut self, child: usize, parent: usize, truth: &ResolvedRelations) {
        let d = truth.contains(child, parent);
        let r = truth.contains(parent, child);
        self.edges += 1;
        self.directed += d as usize;
        self.reversed += r as usize;
        self.undirected += (d || r) as usize;
    }

    pub(crate) fn add(&mut self, other: &EdgeHits) {
        self.edges += other.edges;
        self.directed += other.directed;
        self.reversed += other.reversed;
        self.undirected += other.undirected;
    }

    fn ratio(hits: usize, edges: usize) -> f64 {
        if edges == 0 {
            0.0
        } else {
            hits as f64 / edges as f64
        }
    }

    pub fn directed_acc(&self) -> f64 {
        Self::ratio(self.directed, self.edges)
    }

    pub fn reversed_acc(&self) -> f64 {
        Self::ratio(self.reversed, self.edges)
    }

    pub fn undirected_acc(&self) -> f64 {
        Self::ratio(self.undirected, self.edges)
    }
}

/// Edge accuracies of a tree against a ground-truth relation set. Edges to
/// the artificial root are not scored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalReport {
    pub directed_acc: f64,
    pub reversed_acc: f64,
    pub undirected_acc: f64,
    pub hits: EdgeHits,
    /// Undirected accuracy against a synonym set, when one was supplied.
    pub synonym_acc: Option<f64>,
}

impl EvalReport {
    pub fn from_hits(hits: EdgeHits) -> Self {
        EvalReport {
            directed_acc: hits.directed_acc(),
            reversed_acc: hits.reversed_acc(),
            undirected_acc: hits.undirected_acc(),
            hits,
            synonym_acc: None,
        }
    }

    pub fn n_edges(&self) -> usize {
        self.hits.edges
    }
}

pub(crate) fn count_hits(tree: &Arborescence, truth: &ResolvedRelations) -> Result<EdgeHits> {
    let mut hits = EdgeHits::default();
    for (child, parent) in tree.real_edges() {
        hits.record(child, parent, truth);
    }
    if hits.edges == 0 {
        return Err(Error::NoScorableEdges);
    }
    Ok(hits)
}

pub fn edge_accuracy(tree: &Arborescence, truth: &ResolvedRelations) -> Result<EvalReport> {
    Ok(EvalReport::from_hits(count_hits(tree, truth)?))
}

/// Undirected accuracy against a symmetric synonym relation.
pub fn synonym_accuracy(tree: &Arborescence, synonyms: &ResolvedRelations) -> Result<f64> {
    Ok(count_hits(tree, synonyms)?.undirected_acc())
}

/// [`edge_accuracy`] with the synonym accuracy filled in.
pub fn edge_accuracy_with_synonyms(
    tree: &Arborescence,
    truth: &ResolvedRelations,
    synonyms: &ResolvedRelations,
) -> Result<EvalReport> {
    let mut report = edge_accuracy(tree, truth)?;
    report.synonym_acc = Some(synonym_accuracy(tree, synonyms)?);
    Ok(report)
}
