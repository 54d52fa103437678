//! Dense symmetry map from the spectral embedding, using indexed and
//! exhaustive nearest-neighbour search, plus the involution check.
//!
//!     cargo run --release --example dense_map

use std::time::Instant;

use symmetria::dense::{brute_force_map, embed, involution_diagnostics, nearest_neighbor_map};
use symmetria::synthetic::mirrored_blob;
use symmetria::{detect, AdjacencyIndex, RunConfig};

fn main() -> anyhow::Result<()> {
    let shape = mirrored_blob(20);
    let det = detect(&shape.mesh, &RunConfig::default())?;
    let embedding = embed(&det.basis, &det.map, Some(&det.correction))?;
    println!("embedding: {} points in {} dimensions", embedding.n(), embedding.dim);

    let start = Instant::now();
    let fast = nearest_neighbor_map(&embedding);
    let t_fast = start.elapsed().as_secs_f64();
    let start = Instant::now();
    let slow = brute_force_map(&embedding);
    let t_slow = start.elapsed().as_secs_f64();
    println!(
        "kd-tree {:.1} ms, linear scan {:.1} ms, identical: {}",
        t_fast * 1e3,
        t_slow * 1e3,
        fast == slow
    );

    let exact = fast.sigma.iter().zip(&shape.involution).filter(|(a, b)| a == b).count();
    println!("σ equals the mirror on {exact}/{} vertices", fast.n());

    let adj = AdjacencyIndex::build(&shape.mesh)?;
    let errors = involution_diagnostics(&shape.mesh, &adj, &fast.sigma);
    let fixed = errors.iter().filter(|&&e| e == 0.0).count();
    println!("σ∘σ = id on {fixed}/{} vertices", errors.len());
    Ok(())
}
