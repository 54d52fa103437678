//! Dense symmetry map by nearest neighbours in the spectral embedding.
//!
//! Vertex `j` is embedded as `Rᵀφ(j)` over the active eigenfunctions; its
//! symmetric partner is the vertex whose reflected embedding `CRᵀφ(j')` is
//! closest.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::adjacency::AdjacencyIndex;
use crate::correction::RotationCorrection;
use crate::error::{Result, SymmetryError};
use crate::functional_map::FunctionalMap;
use crate::geodesics::Dijkstra;
use crate::kdtree::KdTree;
use crate::mesh::TriangleMesh;
use crate::spectral::SpectralBasis;

/// Source and reflected target embeddings, `n` points of dimension `dim`,
/// stored row-major (one row per vertex).
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub dim: usize,
    pub source: Vec<f64>,
    pub target: Vec<f64>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.source.len() / self.dim
    }

    pub fn source_point(&self, v: usize) -> &[f64] {
        &self.source[v * self.dim..(v + 1) * self.dim]
    }

    pub fn target_point(&self, v: usize) -> &[f64] {
        &self.target[v * self.dim..(v + 1) * self.dim]
    }
}

/// Builds `RᵀΦᵀ` and `CRᵀΦᵀ` over the active eigenfunctions of `map`.
/// `rotation` of `None` means the identity.
pub fn embed(
    basis: &SpectralBasis,
    map: &FunctionalMap,
    rotation: Option<&RotationCorrection>,
) -> Result<Embedding> {
    let active = &map.active;
    let dim = active.len();
    if dim < 3 {
        return Err(SymmetryError::DegenerateMap(format!(
            "embedding needs at least 3 active eigenfunctions, got {dim}"
        )));
    }
    let r = match rotation {
        Some(c) if c.rotation.shape() != (dim, dim) => {
            return Err(SymmetryError::Dimension(format!(
                "rotation is {:?}, expected {dim}x{dim}",
                c.rotation.shape()
            )))
        }
        Some(c) => c.rotation.clone(),
        None => DMatrix::identity(dim, dim),
    };
    let signs = map.active_signs();
    let n = basis.n();
    let mut source = vec![0.0; n * dim];
    let mut target = vec![0.0; n * dim];
    for v in 0..n {
        for i in 0..dim {
            // (Rᵀφ(v))_i = Σ_a R[a,i] φ_a(v)
            let s: f64 = active
                .iter()
                .enumerate()
                .map(|(a, &col)| r[(a, i)] * basis.phi[(v, col)])
                .sum();
            source[v * dim + i] = s;
            target[v * dim + i] = signs[i] * s;
        }
    }
    Ok(Embedding {
        dim,
        source,
        target,
    })
}

/// Per-vertex symmetric partner and match quality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymmetryMap {
    pub sigma: Vec<usize>,
    pub nn_distance: Vec<f64>,
}

impl SymmetryMap {
    pub fn n(&self) -> usize {
        self.sigma.len()
    }
}

/// `σ(j) = argmin_j' ‖source_j − target_j'‖`, ties to the smaller index.
pub fn nearest_neighbor_map(embedding: &Embedding) -> SymmetryMap {
    let tree = KdTree::build(embedding.target.clone(), embedding.dim);
    let (sigma, nn_distance) = (0..embedding.n())
        .into_par_iter()
        .map(|v| {
            let (j, d2) = tree
                .nearest(embedding.source_point(v))
                .expect("non-empty embedding");
            (j, d2.sqrt())
        })
        .unzip();
    SymmetryMap { sigma, nn_distance }
}

/// Reference O(n²) version of [`nearest_neighbor_map`].
pub fn brute_force_map(embedding: &Embedding) -> SymmetryMap {
    let (sigma, nn_distance) = (0..embedding.n())
        .into_par_iter()
        .map(|v| {
            let (j, d2) = crate::kdtree::brute_force_nearest(
                &embedding.target,
                embedding.dim,
                embedding.source_point(v),
            )
            .expect("non-empty embedding");
            (j, d2.sqrt())
        })
        .unzip();
    SymmetryMap { sigma, nn_distance }
}

/// Geodesic distance between `j` and `σ(σ(j))` for every vertex.
pub fn involution_diagnostics(
    mesh: &TriangleMesh,
    adj: &AdjacencyIndex,
    sigma: &[usize],
) -> Vec<f64> {
    (0..sigma.len())
        .into_par_iter()
        .map_init(
            || Dijkstra::new(mesh, adj),
            |dijkstra, j| dijkstra.distance(j, sigma[sigma[j]]),
        )
        .collect()
}
