//! LCA hit-rate of trees built in descending and ascending power order, with
//! the planted common ancestor as ground truth.
//!
//! cargo run --release --example lca_hit_rate

use std::collections::BTreeSet;

use orient::builder::{build_arborescence, BuildConfig, InsertionOrder};
use orient::lca::{sample_pairs, tree_hit_rate};
use orient::nnindex::BallTree;
use orient::synthetic::{PlantedConfig, PlantedHierarchy};

fn main() -> Result<(), orient::Error> {
    let h = PlantedHierarchy::generate(&PlantedConfig::default())?;
    let e = &h.embedding;
    let index = BallTree::build(e, &h.powers, Default::default(), 32)?;
    let pairs = sample_pairs(e, &index, 5000, 20, 1)?;
    let truth: Vec<BTreeSet<usize>> = pairs.iter().map(|&(a, b)| h.lca(a, b).into_iter().collect()).collect();
    let scorable = truth.iter().filter(|s| !s.is_empty()).count();
    println!("{} pairs, {scorable} with a planted common ancestor", pairs.len());

    for order in InsertionOrder::ALL {
        let cfg = BuildConfig { order, ..BuildConfig::default() };
        let tree = build_arborescence(e, &h.powers, &cfg)?;
        let rates: Vec<String> = (0..=2)
            .map(|c| tree_hit_rate(&tree, &pairs, &truth, c).map(|r| format!("c={c}: {r:.4}")))
            .collect::<Result<_, _>>()?;
        println!("{order:<5} {}", rates.join("  "));
    }
    Ok(())
}
