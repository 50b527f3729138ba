//! Arborescence construction.
//!
//! Entities are inserted one by one following an [`InsertionPlan`]. Each new
//! entity picks its parent among the artificial root and the entities already
//! in the tree, maximizing the combined distance/power score (see
//! [`crate::score`]). The root sits at the centroid; its power is the mean
//! power of the entities inserted so far, so it loses influence as the tree
//! grows.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::distance::{distance_unchecked, is_zero, DistanceKind};
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::nnindex::{BallTree, DEFAULT_LEAF_SIZE};
use crate::power::PowerAssignment;
use crate::score::{distance_term, Candidate, ScoreParams};
use crate::tree::{node_of, Arborescence, ROOT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum InsertionOrder {
    #[default]
    Descending,
    Random,
    Ascending,
}

impl InsertionOrder {
    pub const ALL: [InsertionOrder; 3] = [
        InsertionOrder::Descending,
        InsertionOrder::Random,
        InsertionOrder::Ascending,
    ];

    pub fn short_name(&self) -> &'static str {
        match self {
            InsertionOrder::Descending => "desc",
            InsertionOrder::Random => "rand",
            InsertionOrder::Ascending => "asc",
        }
    }
}

impl fmt::Display for InsertionOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for InsertionOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "desc" | "descending" => Ok(InsertionOrder::Descending),
            "rand" | "random" => Ok(InsertionOrder::Random),
            "asc" | "ascending" => Ok(InsertionOrder::Ascending),
            other => Err(Error::InvalidParameter(format!("unknown order `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ParentRule {
    #[default]
    ScoreArgmax,
    /// Baseline: parent drawn uniformly among the current candidates.
    RandomSelection,
}

impl FromStr for ParentRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "score" | "score_argmax" => Ok(ParentRule::ScoreArgmax),
            "random" | "random_selection" => Ok(ParentRule::RandomSelection),
            other => Err(Error::InvalidParameter(format!("unknown parent rule `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    /// Weight on the distance term, in `[0, 1]`.
    pub p: f64,
    pub distance: DistanceKind,
    pub order: InsertionOrder,
    pub parent_rule: ParentRule,
    pub seed: u64,
    /// Use the ball tree for parent search. The result is identical either way.
    pub accelerated: bool,
    /// Distances below this are treated as equal to it.
    pub epsilon_dist: f64,
    pub leaf_size: usize,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            p: 0.6,
            distance: DistanceKind::Euclidean,
            order: InsertionOrder::Descending,
            parent_rule: ParentRule::ScoreArgmax,
            seed: 0,
            accelerated: true,
            epsilon_dist: 1e-12,
            leaf_size: DEFAULT_LEAF_SIZE,
        }
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {}", self.p)));
        }
        // below ~1e-150 the squared guard underflows
        if !(self.epsilon_dist >= 1e-150 && self.epsilon_dist.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon_dist must be a positive number >= 1e-150, got {}",
                self.epsilon_dist
            )));
        }
        if self.leaf_size == 0 {
            return Err(Error::InvalidParameter("leaf_size must be positive".into()));
        }
        Ok(())
    }
}

/// The order in which entities enter the tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InsertionPlan {
    pub sequence: Vec<usize>,
    pub order: InsertionOrder,
    pub seed: u64,
}

/// Descending sorts by power (ties by index); ascending is its exact reverse;
/// random is a seeded shuffle.
pub fn make_plan(powers: &PowerAssignment, order: InsertionOrder, seed: u64) -> InsertionPlan {
    let n = powers.len();
    let mut sequence: Vec<usize> = (0..n).collect();
    match order {
        InsertionOrder::Descending | InsertionOrder::Ascending => {
            sequence.sort_by(|&a, &b| powers.get(b).total_cmp(&powers.get(a)).then(a.cmp(&b)));
            if order == InsertionOrder::Ascending {
                sequence.reverse();
            }
        }
        InsertionOrder::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sequence.shuffle(&mut rng);
        }
    }
    InsertionPlan {
        sequence,
        order,
        seed,
    }
}

/// Mean power of the inserted entities; before the first insertion the root
/// is as powerful as the strongest entity.
pub fn root_power_at_step(inserted: &[f64], all: &PowerAssignment) -> f64 {
    if inserted.is_empty() {
        all.max()
    } else {
        inserted.iter().sum::<f64>() / inserted.len() as f64
    }
}

/// Score of one candidate parent for query `q`.
pub fn score_candidate(
    q: &[f64],
    candidate: &[f64],
    candidate_power: f64,
    params: &ScoreParams,
    kind: DistanceKind,
) -> f64 {
    params.score(distance_unchecked(q, candidate, kind), candidate_power.ln())
}

/// Builds the arborescence. The artificial root is node 0 at the centroid.
pub fn build_arborescence(
    e: &EmbeddingSet,
    powers: &PowerAssignment,
    cfg: &BuildConfig,
) -> Result<Arborescence> {
    cfg.validate()?;
    if powers.len() != e.len() {
        return Err(Error::SizeMismatch {
            what: "powers",
            expected: e.len(),
            found: powers.len(),
        });
    }
    let n = e.len();
    let kind = cfg.distance;
    let centroid = e.centroid();
    if kind == DistanceKind::Cosine && (is_zero(&centroid) || e.rows().any(is_zero)) {
        return Err(Error::ZeroVector);
    }

    let plan = make_plan(powers, cfg.order, cfg.seed);
    let mut selection_rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    selection_rng.set_stream(1);

    let mut index = match (cfg.parent_rule, cfg.accelerated) {
        (ParentRule::ScoreArgmax, true) => Some(BallTree::build(e, powers, kind, cfg.leaf_size)?),
        _ => None,
    };

    let mut parent = vec![None; n + 1];
    let mut edge_length = vec![0.0; n + 1];
    let mut insertion_rank = vec![0; n + 1];
    let mut inserted: Vec<usize> = Vec::with_capacity(n);
    let mut power_sum = 0.0;
    let mut max_entity_log = f64::NEG_INFINITY;

    for (step, &ent) in plan.sequence.iter().enumerate() {
        let q = e.row(ent);
        let chosen = if step == 0 {
            None
        } else {
            match cfg.parent_rule {
                ParentRule::RandomSelection => {
                    let k = selection_rng.random_range(0..=step);
                    (k > 0).then(|| inserted[k - 1])
                }
                ParentRule::ScoreArgmax => {
                    let root_power = power_sum / step as f64;
                    let root_dist = distance_unchecked(q, &centroid, kind);
                    let root_log = root_power.ln();
                    let max_log_power = root_log.max(max_entity_log);
                    match index.as_ref() {
                        Some(tree) => indexed_parent(
                            tree, q, powers, cfg, root_dist, root_log, max_log_power,
                        )?,
                        None => scanned_parent(
                            e, powers, &inserted, q, cfg, root_dist, root_log, max_log_power,
                        ),
                    }
                }
            }
        };

        let node = node_of(ent);
        match chosen {
            Some(p) => {
                parent[node] = Some(node_of(p));
                edge_length[node] = distance_unchecked(q, e.row(p), kind);
            }
            None => {
                parent[node] = Some(ROOT);
                edge_length[node] = distance_unchecked(q, &centroid, kind);
            }
        }
        insertion_rank[node] = step + 1;

        if let Some(tree) = index.as_mut() {
            tree.activate(ent)?;
        }
        inserted.push(ent);
        power_sum += powers.get(ent);
        max_entity_log = max_entity_log.max(powers.get(ent).ln());
    }

    Arborescence::from_parts(parent, edge_length, insertion_rank, centroid)
}

/// Two-phase search: the nearest active entity fixes the distance normalizer,
/// then branch-and-bound finds the score argmax.
fn indexed_parent(
    tree: &BallTree,
    q: &[f64],
    powers: &PowerAssignment,
    cfg: &BuildConfig,
    root_dist: f64,
    root_log: f64,
    max_log_power: f64,
) -> Result<Option<usize>> {
    let (nn, nn_dist) = tree.nearest_active(q)?;
    let params = ScoreParams {
        p: cfg.p,
        max_distance_term: distance_term(root_dist.min(nn_dist), cfg.epsilon_dist),
        max_log_power,
        eps: cfg.epsilon_dist,
    };
    let root = Candidate {
        score: params.score(root_dist, root_log),
        rank_key: 0,
        entity: None,
    };
    let nearest = Candidate {
        score: params.score(nn_dist, powers.get(nn).ln()),
        rank_key: tree.rank_key(nn).expect("nearest entity is active"),
        entity: Some(nn),
    };
    let incumbent = if nearest.beats(&root) { nearest } else { root };
    Ok(tree.best_scoring_with(q, &params, Some(incumbent))?.entity)
}

#[allow(clippy::too_many_arguments)]
fn scanned_parent(
    e: &EmbeddingSet,
    powers: &PowerAssignment,
    inserted: &[usize],
    q: &[f64],
    cfg: &BuildConfig,
    root_dist: f64,
    root_log: f64,
    max_log_power: f64,
) -> Option<usize> {
    let eps = cfg.epsilon_dist;
    let dists: Vec<f64> = inserted
        .iter()
        .map(|&c| distance_unchecked(q, e.row(c), cfg.distance))
        .collect();
    let max_distance_term = dists
        .iter()
        .map(|&d| distance_term(d, eps))
        .fold(distance_term(root_dist, eps), f64::max);
    let params = ScoreParams {
        p: cfg.p,
        max_distance_term,
        max_log_power,
        eps,
    };
    let mut best = Candidate {
        score: params.score(root_dist, root_log),
        rank_key: 0,
        entity: None,
    };
    for (k, (&c, &d)) in inserted.iter().zip(&dists).enumerate() {
        let cand = Candidate {
            score: params.score(d, powers.get(c).ln()),
            rank_key: k + 1,
            entity: Some(c),
        };
        if cand.beats(&best) {
            best = cand;
        }
    }
    best.entity
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::power::{zipf_power, PowerSource};
    use crate::tree::entity_of;

    fn line(coords: &[f64], powers: &[f64]) -> (EmbeddingSet, PowerAssignment) {
        let e = EmbeddingSet::new(
            (0..coords.len()).map(|i| format!("x{i}")).collect(),
            coords.iter().map(|&c| vec![c]).collect(),
        )
        .unwrap();
        (e, PowerAssignment::from_raw(powers.to_vec(), PowerSource::External).unwrap())
    }

    #[test]
    fn plans() {
        let p = PowerAssignment::from_raw(vec![3.0, 1.0, 2.0], PowerSource::External).unwrap();
        assert_eq!(make_plan(&p, InsertionOrder::Descending, 0).sequence, vec![0, 2, 1]);
        assert_eq!(make_plan(&p, InsertionOrder::Ascending, 0).sequence, vec![1, 2, 0]);
        let flat = PowerAssignment::from_raw(vec![1.0; 5], PowerSource::External).unwrap();
        assert_eq!(
            make_plan(&flat, InsertionOrder::Descending, 0).sequence,
            vec![0, 1, 2, 3, 4]
        );
        let z = zipf_power(100).unwrap();
        let a = make_plan(&z, InsertionOrder::Random, 42);
        assert_eq!(a, make_plan(&z, InsertionOrder::Random, 42));
        let mut sorted = a.sequence.clone();
        sorted.sort();
        assert_eq!(sorted, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn root_power_rule() {
        let all = PowerAssignment::from_raw(vec![5.0, 2.0, 1.0], PowerSource::External).unwrap();
        assert_eq!(root_power_at_step(&[], &all), 5.0);
        assert_eq!(root_power_at_step(&[4.0, 2.0], &all), 3.0);
        assert_eq!(root_power_at_step(&[7.0], &all), 7.0);
    }

    #[test]
    fn single_entity_goes_to_root() {
        let (e, p) = line(&[2.0], &[1.0]);
        let t = build_arborescence(&e, &p, &BuildConfig::default()).unwrap();
        assert_eq!(t.parent(1), Some(ROOT));
        assert_eq!(t.insertion_rank(1), 1);
        assert_eq!(t.edge_length(1), 0.0);
    }

    #[test]
    fn collinear_hand_instance() {
        // centroid at 11/3: node@1 is 1 from node@0 and 8/3 from the root;
        // node@10 is 19/3 from the root, 9 from node@1, 10 from node@0.
        let (e, p) = line(&[0.0, 1.0, 10.0], &[3.0, 2.0, 1.0]);
        for accelerated in [true, false] {
            let cfg = BuildConfig {
                p: 1.0,
                accelerated,
                ..Default::default()
            };
            let t = build_arborescence(&e, &p, &cfg).unwrap();
            assert_eq!(t.parent(node_of(0)), Some(ROOT));
            assert_eq!(t.parent(node_of(1)), Some(node_of(0)));
            assert_eq!(t.parent(node_of(2)), Some(ROOT));
            assert!((t.edge_length(node_of(2)) - 19.0 / 3.0).abs() < 1e-12);
            assert_eq!(t.root_vector(), &[11.0 / 3.0]);
        }
    }

    #[test]
    fn power_only_prefers_strongest_or_root() {
        // p = 0: second entity ties the root (root power equals the first
        // entity's power), and the root wins the tie.
        let (e, p) = line(&[0.0, 1.0, 2.0, 3.0], &[8.0, 4.0, 2.0, 1.0]);
        let cfg = BuildConfig {
            p: 0.0,
            ..Default::default()
        };
        let t = build_arborescence(&e, &p, &cfg).unwrap();
        assert_eq!(t.parent(node_of(1)), Some(ROOT));
        // root power is now mean(8, 4) = 6 < 8, so entity 0 dominates
        assert_eq!(t.parent(node_of(2)), Some(node_of(0)));
        assert_eq!(t.parent(node_of(3)), Some(node_of(0)));
    }

    #[test]
    fn random_selection_is_seeded_and_valid() {
        let (e, p) = line(&[0.0, 1.0, 2.0, 3.0, 4.0, 5.0], &[6.0, 5.0, 4.0, 3.0, 2.0, 1.0]);
        let cfg = BuildConfig {
            parent_rule: ParentRule::RandomSelection,
            seed: 3,
            ..Default::default()
        };
        let a = build_arborescence(&e, &p, &cfg).unwrap();
        let b = build_arborescence(&e, &p, &cfg).unwrap();
        assert_eq!(a, b);
        a.check().unwrap();
        for node in 1..a.n_nodes() {
            let parent = a.parent(node).unwrap();
            assert!(a.insertion_rank(parent) < a.insertion_rank(node));
            if let Some(pe) = entity_of(parent) {
                assert!(pe < entity_of(node).unwrap());
            }
        }
    }

    #[test]
    fn rejects_bad_config_and_sizes() {
        let (e, p) = line(&[0.0, 1.0], &[2.0, 1.0]);
        let cfg = BuildConfig {
            p: 1.5,
            ..Default::default()
        };
        assert!(matches!(build_arborescence(&e, &p, &cfg), Err(Error::InvalidParameter(_))));
        let short = PowerAssignment::from_raw(vec![1.0], PowerSource::External).unwrap();
        assert!(matches!(
            build_arborescence(&e, &short, &BuildConfig::default()),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn cosine_rejects_zero_centroid() {
        let e = EmbeddingSet::new(
            vec!["a".into(), "b".into()],
            vec![vec![1.0, 0.0], vec![-1.0, 0.0]],
        )
        .unwrap();
        let p = PowerAssignment::from_raw(vec![2.0, 1.0], PowerSource::External).unwrap();
        let cfg = BuildConfig {
            distance: DistanceKind::Cosine,
            ..Default::default()
        };
        assert!(matches!(build_arborescence(&e, &p, &cfg), Err(Error::ZeroVector)));
    }
}
