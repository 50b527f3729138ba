//! End-to-end file pipeline: write a GloVe-style text file and a relation
//! list, load them, build, export, reload, and write accuracy curves.
//!
//! cargo run --release --example glove_pipeline -- [output dir]

use std::fmt::Write as _;
use std::path::PathBuf;

use orient::builder::{build_arborescence, BuildConfig};
use orient::eval::{accuracy_by_edge_length, accuracy_by_node_power, edge_accuracy};
use orient::io::{export_tree, load_embedding, load_relations, load_tree, write_csv, EmbeddingFormat, LabeledTree, TreeFormat};
use orient::power::zipf_power;
use orient::synthetic::{PlantedConfig, PlantedHierarchy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("orient-glove"));
    std::fs::create_dir_all(&dir)?;

    // fixture files, rows written most powerful first
    let h = PlantedHierarchy::generate(&PlantedConfig { n: 800, ..Default::default() })?;
    let mut rows: Vec<usize> = (0..h.len()).collect();
    rows.sort_by(|&a, &b| h.powers.get(b).total_cmp(&h.powers.get(a)).then(a.cmp(&b)));
    let mut text = String::new();
    for &i in &rows {
        write!(text, "{}", h.embedding.label(i))?;
        for v in h.embedding.row(i) {
            write!(text, " {v:.6}")?;
        }
        text.push('\n');
    }
    std::fs::write(dir.join("vectors.txt"), text)?;
    let mut pairs = String::from("# hyponym\thypernym\n");
    for (c, p) in h.relations().iter() {
        writeln!(pairs, "{c}\t{p}")?;
    }
    std::fs::write(dir.join("hypernyms.tsv"), pairs)?;

    let e = load_embedding(dir.join("vectors.txt"), EmbeddingFormat::Glove)?;
    let relations = load_relations(dir.join("hypernyms.tsv"), "hypernym")?;
    let powers = zipf_power(e.len())?;
    let tree = build_arborescence(&e, &powers, &BuildConfig::default())?;

    let mut labeled = LabeledTree::new(e.labels().to_vec(), tree)?;
    labeled.powers = Some(powers.powers().to_vec());
    export_tree(&labeled, dir.join("tree.json"), TreeFormat::Json)?;
    let reloaded = load_tree(dir.join("tree.json"))?;
    assert_eq!(reloaded, labeled);

    let truth = relations.resolve_labels(&reloaded.labels);
    let report = edge_accuracy(&reloaded.tree, &truth)?;
    println!(
        "{} entities, {} truth pairs: directed {:.4}, reversed {:.4}, undirected {:.4}",
        e.len(),
        truth.len(),
        report.directed_acc,
        report.reversed_acc,
        report.undirected_acc
    );

    let by_len = accuracy_by_edge_length(&reloaded.tree, &truth, 10)?;
    let by_power = accuracy_by_node_power(&reloaded.tree, &truth, &powers, 10)?;
    write_csv(dir.join("by_edge_length.csv"), by_len.points.iter().map(|p| (p.x, p.hits.directed_acc())))?;
    write_csv(dir.join("by_node_power.csv"), by_power.points.iter().map(|p| (p.x, p.hits.directed_acc())))?;
    println!("directed accuracy by edge-length decile: {:.3?}", by_len.directed());
    println!("files written to {}", dir.display());
    Ok(())
}
