//! Writes color-coded PLY files of two low eigenfunctions, the HKS at the
//! reference time, and the per-vertex correspondence error.
//!
//!     cargo run --release --example export_ply [-- OUT_DIR]

use std::path::PathBuf;

use symmetria::export::write_ply;
use symmetria::geodesics::Dijkstra;
use symmetria::signatures::hks_energy;
use symmetria::synthetic::mirrored_blob;
use symmetria::{detect, AdjacencyIndex, RunConfig};

fn main() -> anyhow::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "ply_out".into()));
    std::fs::create_dir_all(&dir)?;
    let shape = mirrored_blob(24);
    let mesh = &shape.mesh;
    let det = detect(mesh, &RunConfig::default())?;
    let order = det.basis.order();

    for rank in [1, 2] {
        let col = order[rank];
        let field: Vec<f64> = det.basis.phi.column(col).iter().copied().collect();
        let parity = if det.map.signs[col] < 0 { "odd" } else { "even" };
        let path = dir.join(format!("eigenfunction_{}.ply", rank + 1));
        write_ply(&path, mesh, &field, &format!("eigenfunction {} ({parity})", rank + 1))?;
        println!("wrote {}", path.display());
    }

    let hks = hks_energy(&det.basis, det.features.t_h);
    write_ply(dir.join("hks.ply"), mesh, &hks, "hks")?;

    let adj = AdjacencyIndex::build(mesh)?;
    let mut dijkstra = Dijkstra::new(mesh, &adj);
    let error: Vec<f64> = (0..mesh.n_vertices())
        .map(|j| dijkstra.distance(shape.involution[j], det.sigma()[j]))
        .collect();
    write_ply(dir.join("correspondence_error.ply"), mesh, &error, "correspondence error")?;
    println!("wrote hks.ply and correspondence_error.ply to {}", dir.display());
    Ok(())
}
