//! Correspondence rate and mesh rate over a small synthetic dataset: intact
//! meshes at several resolutions plus meshes with a hole cut on one side.
//!
//!     cargo run --release --example evaluate

use symmetria::evaluation::{correspondence_rate, mesh_rate};
use symmetria::mesh::{distance, TriangleMesh};
use symmetria::synthetic::{blob_shape, mirrored_blob, MirroredMesh};
use symmetria::{detect, AdjacencyIndex, RunConfig};

/// Removes x > 0 faces nearest to `center` until `fraction` of the area is gone.
fn with_hole(shape: &MirroredMesh, center: [f64; 3], fraction: f64) -> anyhow::Result<(TriangleMesh, Vec<(usize, usize)>)> {
    let mesh = &shape.mesh;
    let centroid = |f: usize| {
        let [a, b, c] = mesh.faces()[f];
        let (pa, pb, pc) = (mesh.position(a), mesh.position(b), mesh.position(c));
        [0, 1, 2].map(|i| (pa[i] + pb[i] + pc[i]) / 3.0)
    };
    let mut order: Vec<usize> = (0..mesh.n_faces()).filter(|&f| centroid(f)[0] > 0.0).collect();
    order.sort_by(|&a, &b| distance(&centroid(a), &center).total_cmp(&distance(&centroid(b), &center)));
    let mut removed = vec![false; mesh.n_faces()];
    let mut area = 0.0;
    for f in order {
        area += mesh.face_area(f);
        if area > fraction * mesh.surface_area() {
            break;
        }
        removed[f] = true;
    }
    Ok(shape.remove_faces(|f| removed[f])?)
}

fn main() -> anyhow::Result<()> {
    let mut cases: Vec<(String, TriangleMesh, Vec<(usize, usize)>)> = Vec::new();
    for res in [16, 24, 32] {
        let shape = mirrored_blob(res);
        let gt = shape.ground_truth();
        cases.push((format!("blob-{res}"), shape.mesh, gt));
    }
    let shape = mirrored_blob(30);
    for (i, frac) in [0.02, 0.03, 0.10].into_iter().enumerate() {
        let center = blob_shape([0.5, 0.866 * (i as f64).cos(), 0.866 * (i as f64).sin()]);
        let (mesh, gt) = with_hole(&shape, center, frac)?;
        cases.push((format!("hole-{:.0}%", frac * 100.0), mesh, gt));
    }

    let mut rates = Vec::new();
    for (name, mesh, gt) in &cases {
        let det = detect(mesh, &RunConfig::default())?;
        let adj = AdjacencyIndex::build(mesh)?;
        let report = correspondence_rate(mesh, &adj, det.sigma(), gt)?;
        println!(
            "{name:<10} n={:>6}  rate {:.4}  threshold {:.4}",
            mesh.n_vertices(),
            report.corr_rate,
            report.threshold
        );
        rates.push(report.corr_rate);
    }
    println!("mesh rate {:.3}", mesh_rate(&rates)?);
    Ok(())
}
