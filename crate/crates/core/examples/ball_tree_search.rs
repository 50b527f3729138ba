//! Exact nearest-neighbor, k-NN and best-score queries on a ball tree, checked
//! against a plain scan.
//!
//! cargo run --release --example ball_tree_search

use orient::distance::{distance, DistanceKind};
use orient::nnindex::BallTree;
use orient::score::{distance_term, ScoreParams};
use orient::synthetic::uniform_instance;

fn main() -> Result<(), orient::Error> {
    let (e, powers) = uniform_instance(5000, 16, 42)?;
    let mut tree = BallTree::build(&e, &powers, DistanceKind::Euclidean, 32)?;
    println!("{} points, {} balls, depth {}", tree.len(), tree.n_balls(), tree.depth());

    // activate every other entity
    for i in (0..e.len()).step_by(2) {
        tree.activate(i)?;
    }
    let q = e.row(1);

    let (nn, d) = tree.nearest_active(q)?;
    let scan = (0..e.len())
        .step_by(2)
        .map(|i| (i, distance(q, e.row(i), DistanceKind::Euclidean).unwrap()))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .unwrap();
    println!("nearest active: {nn} at {d:.4} (scan: {} at {:.4})", scan.0, scan.1);

    let knn = tree.knn(q, 5, Some(1))?;
    println!("5-NN over all points: {knn:?}");

    let params = ScoreParams {
        p: 0.6,
        max_distance_term: distance_term(d, 1e-12),
        max_log_power: powers.max().ln(),
        eps: 1e-12,
    };
    let (best, score) = tree.best_scoring_active(q, &params)?;
    println!("best-scoring active parent: {best} (score {score:.4}, power {:.1})", powers.get(best));
    Ok(())
}
