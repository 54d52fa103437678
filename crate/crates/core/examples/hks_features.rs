//! Heat kernel signature feature points on the mirrored dumbbell. Each
//! feature is printed next to its mirror image to show the set is closed
//! under the symmetry.
//!
//!     cargo run --release --example hks_features

use symmetria::signatures::{detect_features, FeatureOptions};
use symmetria::synthetic::mirrored_dumbbell;
use symmetria::{eigendecompose, AdjacencyIndex, LaplaceOperator};

fn main() -> anyhow::Result<()> {
    let shape = mirrored_dumbbell(16);
    let adj = AdjacencyIndex::build(&shape.mesh)?;
    let op = LaplaceOperator::assemble(&shape.mesh)?;
    let basis = eigendecompose(&op, 13)?;
    let features = detect_features(&adj, &basis, &FeatureOptions::default())?;

    println!("t_h = {:.4}, {} time samples", features.t_h, features.time_samples.len());
    for (j, &v) in features.indices.iter().enumerate() {
        let p = shape.mesh.position(v);
        let mirror = shape.involution[v];
        let paired = features.indices.contains(&mirror);
        println!(
            "  vertex {v:>5} at ({:+.3}, {:+.3}, {:+.3})  energy {:.4e}  mirror {mirror:>5} {}",
            p[0],
            p[1],
            p[2],
            features.energies[j],
            if paired { "(also a feature)" } else { "" }
        );
    }
    Ok(())
}
