//! Exact minimum-cost pairing of feature points, checked against exhaustive
//! enumeration and timed at the largest supported size.
//!
//!     cargo run --release --example pairing

use std::time::Instant;

use nalgebra::DMatrix;
use symmetria::pairing::{brute_force_assignment, solve_assignment, AffinityMatrix};

/// Deterministic pseudo-random costs in [0, 1).
fn costs(d: usize, seed: u64) -> DMatrix<f64> {
    let mut state = seed;
    let mut next = || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut w = DMatrix::from_element(d, d, 10.0);
    for a in 0..d {
        for b in a + 1..d {
            let v = next();
            w[(a, b)] = v;
            w[(b, a)] = v;
        }
    }
    w
}

fn main() -> anyhow::Result<()> {
    let aff = AffinityMatrix::from_matrix(costs(8, 1), 10.0)?;
    let exact = solve_assignment(&aff, 3)?;
    let brute = brute_force_assignment(&aff, 3)?;
    println!("d=8 c=3: {:?} cost {:.4}", exact.pairs, exact.total_cost);
    println!("exhaustive:  {:?} cost {:.4}", brute.pairs, brute.total_cost);

    let big = AffinityMatrix::from_matrix(costs(25, 2), 10.0)?;
    let start = Instant::now();
    let p = solve_assignment(&big, 8)?;
    println!(
        "d=25 c=8: {:?} cost {:.4} in {:.1} ms",
        p.pairs,
        p.total_cost,
        start.elapsed().as_secs_f64() * 1e3
    );
    Ok(())
}
