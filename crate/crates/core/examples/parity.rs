//! Parity of each eigenfunction under the mirror, read from geodesic paths
//! between symmetric points, next to the exact value from the known
//! involution.
//!
//!     cargo run --release --example parity

use symmetria::functional_map::{eigenfunction_sign, parity_oracle, DEFAULT_EPS_SIGN};
use symmetria::geodesics::Dijkstra;
use symmetria::spectral::{eigen_gap_flags, DEFAULT_TAU_GAP};
use symmetria::synthetic::mirrored_blob;
use symmetria::{eigendecompose, AdjacencyIndex, LaplaceOperator};

fn main() -> anyhow::Result<()> {
    let shape = mirrored_blob(20);
    let mesh = &shape.mesh;
    let adj = AdjacencyIndex::build(mesh)?;
    let op = LaplaceOperator::assemble(mesh)?;
    let basis = eigendecompose(&op, 13)?;
    let flags = eigen_gap_flags(&basis.eigenvalues, DEFAULT_TAU_GAP);
    let oracle = parity_oracle(&basis, &op.mass, &shape.involution);

    // a handful of symmetric pairs away from the mirror plane
    let mut dijkstra = Dijkstra::new(mesh, &adj);
    let paths = (0..mesh.n_vertices())
        .step_by(mesh.n_vertices() / 5)
        .filter(|&v| shape.involution[v] != v)
        .map(|v| dijkstra.shortest_path(v, shape.involution[v]))
        .collect::<Result<Vec<_>, _>>()?;

    println!("{:>4} {:>10} {:>6} {:>11} {:>8}", "col", "λ", "vote", "confidence", "oracle");
    for c in basis.order() {
        let vote = eigenfunction_sign(&basis, &paths, c, DEFAULT_EPS_SIGN);
        println!(
            "{c:>4} {:>10.4} {:>+6} {:>11.3} {:>+8.3}{}",
            basis.eigenvalues[c],
            vote.sign,
            vote.confidence,
            oracle[c],
            if flags[c] { "  (near-repeated)" } else { "" }
        );
    }
    Ok(())
}
