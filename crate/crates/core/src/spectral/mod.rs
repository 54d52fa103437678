//! Discrete Laplace-Beltrami operator and its low-frequency eigenbasis.

mod eigen;
mod operator;

pub use eigen::{eigendecompose, eigendecompose_with, EigenOptions, SpectralBasis};
pub use operator::{CsrMatrix, LaplaceOperator};

/// Default number of eigenpairs.
pub const DEFAULT_K: usize = 13;

/// Default relative gap below which neighbouring eigenvalues are treated as repeated.
pub const DEFAULT_TAU_GAP: f64 = 1e-3;

/// Flags eigenvalues that are too close to a neighbour to have a well-defined
/// parity under a self-isometry.
///
/// Neighbours are taken in ascending eigenvalue order, so the result does not
/// depend on the column order of `basis`. The returned vector is indexed by
/// column.
pub fn eigen_gap_flags(eigenvalues: &[f64], tau_gap: f64) -> Vec<bool> {
    let k = eigenvalues.len();
    let order = ascending_order(eigenvalues);
    let lambda2 = if k > 1 { eigenvalues[order[1]] } else { 0.0 };
    let mut flags = vec![false; k];
    for (pos, &col) in order.iter().enumerate() {
        let l = eigenvalues[col];
        let mut gap = f64::INFINITY;
        if pos > 0 {
            gap = gap.min((l - eigenvalues[order[pos - 1]]).abs());
        }
        if pos + 1 < k {
            gap = gap.min((l - eigenvalues[order[pos + 1]]).abs());
        }
        let scale = l.max(lambda2);
        flags[col] = scale > 0.0 && gap / scale < tau_gap;
    }
    flags
}

/// Column indices sorted by eigenvalue, ties broken by column index.
pub fn ascending_order(eigenvalues: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]).then(a.cmp(&b)));
    order
}
