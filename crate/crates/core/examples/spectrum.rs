//! Laplace-Beltrami spectrum of a few meshes: eigenvalues, near-repeat flags,
//! residuals and mass-orthonormality.
//!
//!     cargo run --release --example spectrum

use symmetria::spectral::{eigen_gap_flags, DEFAULT_TAU_GAP};
use symmetria::synthetic::{icosphere, mirrored_blob, mirrored_dumbbell};
use symmetria::{eigendecompose, LaplaceOperator, TriangleMesh};

fn show(name: &str, mesh: &TriangleMesh) -> anyhow::Result<()> {
    let op = LaplaceOperator::assemble(mesh)?;
    let basis = eigendecompose(&op, 13)?;
    let flags = eigen_gap_flags(&basis.eigenvalues, DEFAULT_TAU_GAP);
    let residual = basis.residuals(&op).into_iter().fold(0.0, f64::max);
    println!(
        "{name}: n={} max residual {residual:.1e}, orthonormality {:.1e}",
        mesh.n_vertices(),
        basis.orthonormality_error(&op.mass)
    );
    for c in basis.order() {
        let mark = if flags[c] { "  near-repeated" } else { "" };
        println!("  λ = {:>12.6}{mark}", basis.eigenvalues[c]);
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    // the unit sphere has eigenvalues l(l+1) with multiplicity 2l+1
    show("icosphere", &icosphere(3))?;
    show("blob", &mirrored_blob(20).mesh)?;
    show("dumbbell", &mirrored_dumbbell(16).mesh)?;
    Ok(())
}
