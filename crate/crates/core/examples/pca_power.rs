//! Power from principal-component projections, and the debiased vectors.
//!
//! cargo run --release --example pca_power

use orient::power::{debias_embedding, fit_pca, pca_power, spearman};
use orient::synthetic::zipf_magnitude_embedding;

fn main() -> Result<(), orient::Error> {
    let (e, magnitudes) = zipf_magnitude_embedding(2000, 50, 0.1, 7)?;
    let model = fit_pca(&e, 3)?;
    let power = pca_power(&e, &model)?;
    println!("components: {}, orthonormality error {:.1e}", model.k(), model.orthonormality_error());
    println!("spearman(pca power, magnitude) = {:.4}", spearman(power.powers(), &magnitudes));
    for i in [0, 1, 10, 100, 1000, 1999] {
        println!("  row {i:>4}: magnitude {:>8.2}  power {:>8.2}", magnitudes[i], power.get(i));
    }

    let debiased = debias_embedding(&e, &model)?;
    let worst = debiased
        .rows()
        .flat_map(|v| model.components().iter().map(move |u| v.iter().zip(u).map(|(a, b)| a * b).sum::<f64>().abs()))
        .fold(0.0, f64::max);
    println!("max |debiased . component| = {worst:.2e}");
    Ok(())
}
