//! Degree and PageRank power over a small link graph.
//!
//! cargo run --example pagerank_power

use orient::embedding::EmbeddingSet;
use orient::power::{degree_power, pagerank_power, pagerank_raw, PageRankConfig};
use orient::relations::RelationSet;

fn main() -> Result<(), orient::Error> {
    let pages = ["Science", "Physics", "Chemistry", "Quantum", "Atom", "Orphan"];
    let e = EmbeddingSet::new(
        pages.iter().map(|p| p.to_string()).collect(),
        (0..pages.len()).map(|i| vec![i as f64]).collect(),
    )?;
    // link source -> link target
    let links = RelationSet::from_pairs(
        "links",
        [
            ("Physics", "Science"),
            ("Chemistry", "Science"),
            ("Quantum", "Physics"),
            ("Atom", "Physics"),
            ("Atom", "Chemistry"),
            ("Science", "Physics"),
        ],
    );

    let run = pagerank_raw(&links, &e, PageRankConfig::default())?;
    println!("converged after {} iterations (last residual {:.2e})", run.residuals.len(), run.residuals.last().unwrap());
    let pr = pagerank_power(&links, &e, PageRankConfig::default())?;
    let deg = degree_power(&links, &e)?;
    println!("{:<10} {:>9} {:>9} {:>7}", "page", "pagerank", "pr power", "degree");
    for (i, p) in pages.iter().enumerate() {
        println!("{p:<10} {:>9.4} {:>9.3} {:>7.1}", run.ranks[i], pr.get(i), deg.get(i));
    }
    Ok(())
}
