//! Correspondence rate and mesh rate against ground-truth symmetric pairs.

use rayon::prelude::*;
use serde::Serialize;

use crate::adjacency::AdjacencyIndex;
use crate::error::{Result, SymmetryError};
use crate::geodesics::Dijkstra;
use crate::mesh::TriangleMesh;

/// Meshes whose correspondence rate is strictly above this count towards the mesh rate.
pub const MESH_RATE_THRESHOLD: f64 = 0.75;

/// Geodesic error threshold `√(area / 20π)`.
pub fn error_threshold(area: f64) -> f64 {
    (area / (20.0 * std::f64::consts::PI)).sqrt()
}

#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    /// Edge-graph geodesic distance between the true and the estimated partner.
    pub per_pair_error: Vec<f64>,
    pub threshold: f64,
    pub true_positives: usize,
    pub corr_rate: f64,
    pub geodesics: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_seconds: Option<f64>,
}

/// Scores `sigma` against `(j, partner_of_j)` ground-truth pairs: a pair is a
/// true positive when `σ(j)` lies within the threshold of the true partner.
pub fn correspondence_rate(
    mesh: &TriangleMesh,
    adj: &AdjacencyIndex,
    sigma: &[usize],
    ground_truth: &[(usize, usize)],
) -> Result<EvalReport> {
    if ground_truth.is_empty() {
        return Err(SymmetryError::EmptyGroundTruth);
    }
    let n = mesh.n_vertices();
    if sigma.len() != n {
        return Err(SymmetryError::Dimension(format!(
            "correspondence has {} entries for {n} vertices",
            sigma.len()
        )));
    }
    for &(j, g) in ground_truth {
        for v in [j, g] {
            if v >= n {
                return Err(SymmetryError::Index { index: v, len: n });
            }
        }
    }
    if let Some(&bad) = sigma.iter().find(|&&s| s >= n) {
        return Err(SymmetryError::Index { index: bad, len: n });
    }
    let threshold = error_threshold(mesh.surface_area());
    let per_pair_error: Vec<f64> = ground_truth
        .par_iter()
        .map_init(
            || Dijkstra::new(mesh, adj),
            |dijkstra, &(j, g)| dijkstra.distance(g, sigma[j]),
        )
        .collect();
    let true_positives = per_pair_error.iter().filter(|&&e| e < threshold).count();
    Ok(EvalReport {
        threshold,
        true_positives,
        corr_rate: true_positives as f64 / ground_truth.len() as f64,
        per_pair_error,
        geodesics: "dijkstra-edge-graph",
        runtime_seconds: None,
    })
}

/// Fraction of correspondence rates strictly above 75%.
pub fn mesh_rate(rates: &[f64]) -> Result<f64> {
    if rates.is_empty() {
        return Err(SymmetryError::Config("mesh rate of an empty dataset".into()));
    }
    Ok(rates.iter().filter(|&&r| r > MESH_RATE_THRESHOLD).count() as f64 / rates.len() as f64)
}
