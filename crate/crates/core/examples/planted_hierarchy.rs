//! Sweeps `p` over all insertion methods on a planted hierarchy and prints
//! the best directed accuracy per method.
//!
//! cargo run --release --example planted_hierarchy -- [seed] [n]

use orient::builder::BuildConfig;
use orient::eval::{default_p_grid, sweep_p, Method};
use orient::synthetic::{PlantedConfig, PlantedHierarchy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1000);

    let h = PlantedHierarchy::generate(&PlantedConfig {
        n,
        seed,
        ..Default::default()
    })?;
    let truth = h.truth();
    let table = sweep_p(
        &h.embedding,
        &h.powers,
        &BuildConfig::default(),
        &default_p_grid(),
        &Method::ALL,
        &truth,
        None,
    )?;

    println!("{:<18} {:>5} {:>9} {:>9} {:>10}", "method", "p", "directed", "reversed", "undirected");
    for m in table.methods() {
        let best = table.best(m).expect("method has rows");
        let p = best.p.map_or("-".to_string(), |p| format!("{p:.1}"));
        println!(
            "{:<18} {:>5} {:>9.4} {:>9.4} {:>10.4}",
            m.to_string(),
            p,
            best.report.directed_acc,
            best.report.reversed_acc,
            best.report.undirected_acc
        );
    }
    Ok(())
}
