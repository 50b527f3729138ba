//! Times the ball-tree build against the exhaustive scan on a planted
//! hierarchy and checks that both give the same tree.
//!
//! cargo run --release --example speedup -- [n] [dim]

use std::time::Instant;

use orient::builder::{build_arborescence, BuildConfig};
use orient::synthetic::{PlantedConfig, PlantedHierarchy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20_000);
    let dim: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(50);

    let h = PlantedHierarchy::generate(&PlantedConfig {
        n,
        dim,
        ..Default::default()
    })?;
    let cfg = BuildConfig::default();

    let t0 = Instant::now();
    let fast = build_arborescence(&h.embedding, &h.powers, &cfg)?;
    let fast_s = t0.elapsed().as_secs_f64();

    let t0 = Instant::now();
    let slow = build_arborescence(
        &h.embedding,
        &h.powers,
        &BuildConfig {
            accelerated: false,
            ..cfg
        },
    )?;
    let slow_s = t0.elapsed().as_secs_f64();

    println!("n={n} dim={dim}");
    println!("ball tree  {fast_s:8.3} s");
    println!("scan       {slow_s:8.3} s");
    println!("speedup    {:8.2}x", slow_s / fast_s);
    println!("identical  {}", fast.parents() == slow.parents());
    Ok(())
}
