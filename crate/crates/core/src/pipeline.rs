//! End-to-end detection: spectrum → features → pairs → parities →
//! correction → dense map.

use std::time::Instant;

use serde::Serialize;

use crate::adjacency::AdjacencyIndex;
use crate::config::RunConfig;
use crate::correction::{
    optimize, CorrectionProblem, OptimizerOptions, RotationCorrection,
};
use crate::dense::{embed, involution_diagnostics, nearest_neighbor_map, SymmetryMap};
use crate::error::{Result, SymmetryError};
use crate::functional_map::{build_functional_map, FunctionalMap, MapOptions};
use crate::geodesics::{Dijkstra, GeodesicPath};
use crate::mesh::TriangleMesh;
use crate::pairing::{build_affinity, default_pair_count, default_q, solve_assignment, PairSet};
use crate::signatures::{detect_features, edge_sign_agreement, FeatureOptions, FeatureSet};
use crate::spectral::{eigen_gap_flags, eigendecompose_with, EigenOptions, LaplaceOperator, SpectralBasis};

#[derive(Debug, Clone, Serialize)]
pub struct StageTiming {
    pub stage: &'static str,
    pub seconds: f64,
}

/// Everything computed by one detection run.
#[derive(Debug, Clone)]
pub struct Detection {
    pub basis: SpectralBasis,
    pub mass: Vec<f64>,
    pub gap_flags: Vec<bool>,
    pub features: FeatureSet,
    pub q: f64,
    pub pairs: PairSet,
    /// Symmetric pairs as mesh vertex indices.
    pub vertex_pairs: Vec<(usize, usize)>,
    pub paths: Vec<GeodesicPath>,
    pub map: FunctionalMap,
    pub correction: RotationCorrection,
    pub symmetry: SymmetryMap,
    pub involution_error: Option<Vec<f64>>,
    /// Average sign agreement of the low eigenfunctions across mesh edges.
    pub edge_sign_agreement: f64,
    pub timings: Vec<StageTiming>,
}

impl Detection {
    pub fn sigma(&self) -> &[usize] {
        &self.symmetry.sigma
    }

    pub fn seconds(&self, stage: &str) -> Option<f64> {
        self.timings.iter().find(|t| t.stage == stage).map(|t| t.seconds)
    }

    /// Wall time of every stage after the eigensolve.
    pub fn post_eigensolve_seconds(&self) -> f64 {
        self.timings
            .iter()
            .filter(|t| !PRE_SPECTRAL_STAGES.contains(&t.stage))
            .map(|t| t.seconds)
            .sum()
    }
}

const PRE_SPECTRAL_STAGES: [&str; 3] = ["adjacency", "operator", "eigensolve"];

struct Clock {
    timings: Vec<StageTiming>,
    last: Instant,
}

impl Clock {
    fn new() -> Self {
        Self {
            timings: Vec::new(),
            last: Instant::now(),
        }
    }

    fn lap(&mut self, stage: &'static str) {
        let now = Instant::now();
        self.timings.push(StageTiming {
            stage,
            seconds: (now - self.last).as_secs_f64(),
        });
        self.last = now;
    }
}

pub fn eigen_options(config: &RunConfig) -> EigenOptions {
    let mut opts = EigenOptions {
        dense_threshold: config.dense_threshold,
        ..EigenOptions::default()
    };
    if let Some(seed) = config.seed {
        opts.seed = seed;
    }
    opts
}

/// Runs the full pipeline on a mesh.
pub fn detect(mesh: &TriangleMesh, config: &RunConfig) -> Result<Detection> {
    config.validate()?;
    let mut clock = Clock::new();
    let adj = AdjacencyIndex::build(mesh)?;
    clock.lap("adjacency");
    let op = LaplaceOperator::assemble(mesh)?;
    clock.lap("operator");
    let basis = eigendecompose_with(&op, config.k, &eigen_options(config))?;
    clock.lap("eigensolve");
    let mut det = detect_from_basis(mesh, &adj, &op.mass, basis, config)?;
    clock.timings.append(&mut det.timings);
    det.timings = clock.timings;
    Ok(det)
}

/// Runs every stage after the eigensolve on a precomputed basis. Columns of
/// `basis` may be in any order and carry any signs.
pub fn detect_from_basis(
    mesh: &TriangleMesh,
    adj: &AdjacencyIndex,
    mass: &[f64],
    basis: SpectralBasis,
    config: &RunConfig,
) -> Result<Detection> {
    config.validate()?;
    let mut clock = Clock::new();

    let gap_flags = eigen_gap_flags(&basis.eigenvalues, config.tau_gap);
    let features = detect_features(
        adj,
        &basis,
        &FeatureOptions {
            d_max: config.d_max,
            time_steps: config.time_steps,
            ring: 2,
            boundary_margin: config.boundary_margin,
        },
    )?;
    clock.lap("features");

    let c = config
        .pairs
        .unwrap_or_else(|| default_pair_count(features.len(), config.max_pairs));
    if c == 0 {
        return Err(SymmetryError::Infeasible {
            pairs: c,
            features: features.len(),
        });
    }
    let q = default_q(&features, config.q_multiplier);
    let affinity = build_affinity(&features, q);
    let pairs = solve_assignment(&affinity, c)?;
    let vertex_pairs: Vec<(usize, usize)> = pairs
        .pairs
        .iter()
        .map(|&(a, b)| (features.indices[a], features.indices[b]))
        .collect();
    clock.lap("pairing");

    let mut dijkstra = Dijkstra::new(mesh, adj);
    let paths = vertex_pairs
        .iter()
        .map(|&(a, b)| dijkstra.shortest_path(a, b))
        .collect::<Result<Vec<_>>>()?;
    clock.lap("geodesics");

    let map = build_functional_map(
        &basis,
        &paths,
        &gap_flags,
        &MapOptions {
            eps_sign: config.eps_sign,
            min_active: config.min_active,
        },
    )?;
    clock.lap("signs");

    let correction = if config.correction {
        let problem = CorrectionProblem::from_pairs(&basis, &map, &vertex_pairs, config.mu)?;
        let k = problem.dim();
        optimize(
            &problem,
            &nalgebra::DMatrix::identity(k, k),
            &OptimizerOptions {
                max_iter: config.max_iter,
                tol_grad: config.tol_grad,
                hessian: config.hessian,
                ..OptimizerOptions::default()
            },
        )?
    } else {
        RotationCorrection::identity(map.active.len())
    };
    clock.lap("correction");

    let embedding = embed(&basis, &map, Some(&correction))?;
    let symmetry = nearest_neighbor_map(&embedding);
    clock.lap("dense_map");

    let involution_error = config
        .diagnostics
        .then(|| involution_diagnostics(mesh, adj, &symmetry.sigma));
    let agreement = edge_sign_agreement(mesh.edges(), &basis, 13);
    clock.lap("diagnostics");

    Ok(Detection {
        basis,
        mass: mass.to_vec(),
        gap_flags,
        features,
        q,
        pairs,
        vertex_pairs,
        paths,
        map,
        correction,
        symmetry,
        involution_error,
        edge_sign_agreement: agreement,
        timings: clock.timings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct MeshSummary {
    pub vertices: usize,
    pub faces: usize,
    pub surface_area: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvolutionSummary {
    pub median: f64,
    pub max: f64,
    pub threshold: f64,
}

/// JSON-serializable summary of a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport<'a> {
    pub mesh: MeshSummary,
    pub config: &'a RunConfig,
    pub eigenvalues: Vec<f64>,
    pub gap_flags: Vec<bool>,
    pub features: &'a FeatureSet,
    pub q: f64,
    pub pair_cost: f64,
    pub vertex_pairs: &'a [(usize, usize)],
    pub signs: &'a [i8],
    pub confidence: &'a [f64],
    pub active: &'a [usize],
    pub correction: &'a RotationCorrection,
    /// Rows of the correction rotation.
    pub rotation: Vec<Vec<f64>>,
    pub edge_sign_agreement: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub involution: Option<InvolutionSummary>,
    pub timings: &'a [StageTiming],
}

impl Detection {
    pub fn report<'a>(&'a self, mesh: &TriangleMesh, config: &'a RunConfig) -> RunReport<'a> {
        let area = mesh.surface_area();
        let involution = self.involution_error.as_ref().map(|errs| {
            let mut sorted = errs.clone();
            sorted.sort_by(f64::total_cmp);
            InvolutionSummary {
                median: sorted.get(sorted.len() / 2).copied().unwrap_or(0.0),
                max: sorted.last().copied().unwrap_or(0.0),
                threshold: crate::evaluation::error_threshold(area),
            }
        });
        RunReport {
            mesh: MeshSummary {
                vertices: mesh.n_vertices(),
                faces: mesh.n_faces(),
                surface_area: area,
            },
            config,
            eigenvalues: self.basis.eigenvalues.clone(),
            gap_flags: self.gap_flags.clone(),
            features: &self.features,
            q: self.q,
            pair_cost: self.pairs.total_cost,
            vertex_pairs: &self.vertex_pairs,
            signs: &self.map.signs,
            confidence: &self.map.confidence,
            active: &self.map.active,
            correction: &self.correction,
            rotation: self
                .correction
                .rotation
                .row_iter()
                .map(|r| r.iter().copied().collect())
                .collect(),
            edge_sign_agreement: self.edge_sign_agreement,
            involution,
            timings: &self.timings,
        }
    }
}
