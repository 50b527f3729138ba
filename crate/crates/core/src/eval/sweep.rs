//! Build-and-evaluate grid over `p` and insertion methods.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::{edge_accuracy, EvalReport};
use crate::builder::{build_arborescence, BuildConfig, InsertionOrder, ParentRule};
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::lca::tree_hit_rate;
use crate::power::PowerAssignment;
use crate::relations::ResolvedRelations;

/// Environment variable capping worker threads (`0` or unset = all cores).
pub const THREADS_ENV: &str = "ORIENT_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Method {
    Order(InsertionOrder),
    /// Descending insertion with uniformly random parents; `p` is unused.
    RandomSelection,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Order(InsertionOrder::Descending),
        Method::Order(InsertionOrder::Random),
        Method::Order(InsertionOrder::Ascending),
        Method::RandomSelection,
    ];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Order(o) => write!(f, "{o}"),
            Method::RandomSelection => f.write_str("random-selection"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "random-selection" | "rs" => Ok(Method::RandomSelection),
            other => other.parse().map(Method::Order),
        }
    }
}

/// Pre-sampled pairs and ground-truth sets for the LCA hit-rate column.
#[derive(Debug, Clone)]
pub struct LcaInputs {
    pub pairs: Vec<(usize, usize)>,
    /// Ground-truth sets per pair, as entity indices (already closed).
    pub truth_sets: Vec<BTreeSet<usize>>,
    /// Ancestor radius on the tree side.
    pub tree_closure: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub method: Method,
    /// `None` for the random-selection baseline.
    pub p: Option<f64>,
    pub report: EvalReport,
    pub hit_rate: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Row with the highest directed accuracy for `method`; ties go to the
    /// smaller `p`.
    pub fn best(&self, method: Method) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .fold(None, |best: Option<&SweepRow>, r| match best {
                Some(b) if b.report.directed_acc >= r.report.directed_acc => Some(b),
                _ => Some(r),
            })
    }

    /// Highest hit-rate for `method`, if the sweep computed hit-rates.
    pub fn best_hit_rate(&self, method: Method) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.method == method)
            .filter_map(|r| r.hit_rate)
            .reduce(f64::max)
    }

    pub fn methods(&self) -> Vec<Method> {
        let mut out: Vec<Method> = Vec::new();
        for r in &self.rows {
            if !out.contains(&r.method) {
                out.push(r.method);
            }
        }
        out
    }
}

/// `{0.0, 0.1, ..., 1.0}`.
pub fn default_p_grid() -> Vec<f64> {
    (0..=10).map(|i| i as f64 / 10.0).collect()
}

pub(crate) fn thread_pool() -> Result<rayon::ThreadPool> {
    let n = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(0);
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))
}

/// Builds and evaluates one tree per (method, p). Rows come out ordered by
/// method, then by position in `p_values`. The random-selection baseline
/// contributes a single row.
pub fn sweep_p(
    e: &EmbeddingSet,
    powers: &PowerAssignment,
    template: &BuildConfig,
    p_values: &[f64],
    methods: &[Method],
    truth: &ResolvedRelations,
    lca: Option<&LcaInputs>,
) -> Result<SweepTable> {
    if p_values.is_empty() && methods.iter().any(|m| matches!(m, Method::Order(_))) {
        return Err(Error::InvalidParameter("empty p grid".into()));
    }
    let mut cells: Vec<(Method, Option<f64>)> = Vec::new();
    for &m in methods {
        match m {
            Method::Order(_) => cells.extend(p_values.iter().map(|&p| (m, Some(p)))),
            Method::RandomSelection => cells.push((m, None)),
        }
    }
    let run = |&(method, p): &(Method, Option<f64>)| -> Result<SweepRow> {
        let mut cfg = *template;
        match method {
            Method::Order(order) => {
                cfg.order = order;
                cfg.parent_rule = ParentRule::ScoreArgmax;
                cfg.p = p.expect("order cells carry p");
            }
            Method::RandomSelection => {
                cfg.order = InsertionOrder::Descending;
                cfg.parent_rule = ParentRule::RandomSelection;
            }
        }
        let tree = build_arborescence(e, powers, &cfg)?;
        let report = edge_accuracy(&tree, truth)?;
        let hit_rate = lca
            .map(|l| tree_hit_rate(&tree, &l.pairs, &l.truth_sets, l.tree_closure))
            .transpose()?;
        Ok(SweepRow {
            method,
            p,
            report,
            hit_rate,
        })
    };
    let rows = thread_pool()?.install(|| cells.par_iter().map(run).collect::<Result<Vec<_>>>())?;
    Ok(SweepTable { rows })
}
