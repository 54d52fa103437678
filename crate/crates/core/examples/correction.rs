//! Rotation correction on a deliberately mixed eigenbasis. Two eigenfunctions
//! of opposite parity are blended; the trust-region solve finds a rotation
//! that restores the pair constraint.
//!
//!     cargo run --release --example correction

use nalgebra::DMatrix;
use symmetria::correction::{optimize, CorrectionProblem, OptimizerOptions};
use symmetria::synthetic::mirrored_blob;
use symmetria::{detect, RunConfig};

fn main() -> anyhow::Result<()> {
    let shape = mirrored_blob(16);
    let det = detect(&shape.mesh, &RunConfig::default())?;
    let signs = &det.map.signs;
    let active = &det.map.active;
    let odd = *active.iter().find(|&&c| signs[c] < 0).expect("an odd mode");
    let even = *active.iter().skip(1).find(|&&c| signs[c] > 0).expect("an even mode");

    let mut basis = det.basis.clone();
    let (c, s) = (0.25f64.cos(), 0.25f64.sin());
    for r in 0..basis.n() {
        let (a, b) = (det.basis.phi[(r, odd)], det.basis.phi[(r, even)]);
        basis.phi[(r, odd)] = c * a + s * b;
        basis.phi[(r, even)] = -s * a + c * b;
    }
    println!("blended columns {odd} (odd) and {even} (even) by 0.25 rad");

    let problem = CorrectionProblem::from_pairs(&basis, &det.map, &det.vertex_pairs, 1.0)?;
    let k = problem.dim();
    let identity = DMatrix::identity(k, k);
    let result = optimize(&problem, &identity, &OptimizerOptions::default())?;
    for t in &result.trace {
        println!(
            "  iter {:>3}  cost {:.6e}  |grad| {:.2e}  radius {:.2e}  {}",
            t.iteration,
            t.cost,
            t.grad_norm,
            t.radius,
            if t.accepted { "accepted" } else { "rejected" }
        );
    }
    let before = problem.cost_terms(&identity);
    let after = problem.cost_terms(&result.rotation);
    println!("constraint {:.3e} -> {:.3e}", before.constraint, after.constraint);
    println!("total      {:.3e} -> {:.3e}", before.total, after.total);
    Ok(())
}
