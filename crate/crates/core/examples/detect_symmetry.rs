//! Detects the reflective symmetry of a synthetic mirrored mesh, or of a mesh
//! file given on the command line, and scores it when ground truth is known.
//!
//!     cargo run --release --example detect_symmetry [-- mesh.off]

use std::time::Instant;

use symmetria::evaluation::correspondence_rate;
use symmetria::meshio::parse_mesh;
use symmetria::synthetic::mirrored_blob;
use symmetria::{detect, AdjacencyIndex, RunConfig};

fn main() -> anyhow::Result<()> {
    let path = std::env::args().nth(1);
    let (mesh, truth) = match &path {
        Some(p) => (parse_mesh(p, None)?, None),
        None => {
            let shape = mirrored_blob(24);
            let gt = shape.ground_truth();
            (shape.mesh, Some(gt))
        }
    };
    println!("mesh: {} vertices, {} faces", mesh.n_vertices(), mesh.n_faces());

    let start = Instant::now();
    let det = detect(&mesh, &RunConfig::default())?;
    println!("detected in {:.2} s", start.elapsed().as_secs_f64());
    for t in &det.timings {
        println!("  {:<12} {:>8.3} s", t.stage, t.seconds);
    }
    println!("features: {}, pairs: {:?}", det.features.len(), det.vertex_pairs);
    println!("signs: {:?}", det.map.signs);
    println!(
        "correction: {} iterations, cost {:.3e} -> {:.3e}",
        det.correction.iterations, det.correction.initial_cost, det.correction.final_cost
    );

    if let Some(gt) = truth {
        let adj = AdjacencyIndex::build(&mesh)?;
        let report = correspondence_rate(&mesh, &adj, det.sigma(), &gt)?;
        println!(
            "correspondence rate {:.4} ({} / {})",
            report.corr_rate,
            report.true_positives,
            gt.len()
        );
    }
    Ok(())
}
