//! Cuts unusually long edges and compares the resulting clusters with the
//! planted top-level groups.
//!
//! cargo run --release --example semantic_breaks -- [percentile]

use std::collections::BTreeMap;

use orient::builder::{build_arborescence, BuildConfig};
use orient::subtrees::extract_subtrees;
use orient::synthetic::{PlantedConfig, PlantedHierarchy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cutoff: f64 = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(90.0);
    let h = PlantedHierarchy::generate(&PlantedConfig { n: 600, ..Default::default() })?;
    let tree = build_arborescence(&h.embedding, &h.powers, &BuildConfig::default())?;
    let forest = extract_subtrees(&tree, cutoff)?;
    println!(
        "percentile {cutoff}: threshold {:?}, {} clusters",
        forest.threshold, forest.clusters.len()
    );

    let top = |mut i: usize| {
        while let Some(p) = h.parent[i] {
            i = p;
        }
        i
    };
    let mut sizes: Vec<(usize, usize, f64)> = forest
        .clusters
        .iter()
        .map(|c| {
            let mut votes: BTreeMap<usize, usize> = BTreeMap::new();
            for &m in &c.members {
                *votes.entry(top(m)).or_default() += 1;
            }
            let majority = votes.values().max().copied().unwrap_or(0);
            (c.members.len(), c.root, majority as f64 / c.members.len() as f64)
        })
        .collect();
    sizes.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    println!("{:>6} {:>8} {:>7}", "size", "root", "purity");
    for (size, root, purity) in sizes.iter().take(10) {
        println!("{size:>6} {:>8} {purity:>7.3}", h.embedding.label(*root));
    }
    Ok(())
}
