//! Builds a tree over a handful of hand-placed words and prints it.
//!
//! cargo run --example build_tree

use orient::builder::{build_arborescence, BuildConfig};
use orient::embedding::EmbeddingSet;
use orient::io::{write_tree, LabeledTree, TreeFormat};
use orient::power::zipf_power;

fn main() -> Result<(), orient::Error> {
    // rows are listed most frequent first, so zipf power follows row order
    let words = [
        ("animal", [0.0, 0.0]),
        ("plant", [6.0, 0.5]),
        ("dog", [-1.5, 1.0]),
        ("cat", [-1.0, -1.5]),
        ("tree", [7.0, 1.5]),
        ("puppy", [-2.2, 1.6]),
        ("kitten", [-1.4, -2.3]),
        ("oak", [7.8, 2.4]),
    ];
    let e = EmbeddingSet::new(
        words.iter().map(|(w, _)| w.to_string()).collect(),
        words.iter().map(|(_, v)| v.to_vec()).collect(),
    )?;
    let powers = zipf_power(e.len())?;
    let tree = build_arborescence(&e, &powers, &BuildConfig::default())?;

    for i in 0..e.len() {
        let parent = tree.parent_entity(i).map_or("(root)", |p| e.label(p));
        let depth = tree.level(i + 1);
        println!("{}{} -> {parent}", "  ".repeat(depth - 1), e.label(i));
    }

    println!();
    let labeled = LabeledTree::new(e.labels().to_vec(), tree)?;
    write_tree(&labeled, std::io::stdout().lock(), TreeFormat::Dot)
}
