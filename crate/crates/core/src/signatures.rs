//! Heat kernel signatures and HKS feature points.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::adjacency::AdjacencyIndex;
use crate::error::{Result, SymmetryError};
use crate::spectral::SpectralBasis;

pub const DEFAULT_D_MAX: usize = 25;
pub const DEFAULT_TIME_STEPS: usize = 50;
pub const DEFAULT_BOUNDARY_MARGIN: usize = 2;

/// Relative margin a vertex must exceed its neighbours by to count as a
/// strict local maximum; absorbs last-bit noise on flat regions.
const STRICT_MAX_MARGIN: f64 = 1e-12;

/// `4 ln 10`, the numerator of the reference diffusion time.
pub fn four_ln10() -> f64 {
    4.0 * std::f64::consts::LN_10
}

/// `Σᵢ exp(-λᵢ t) φᵢ(x)²` at every vertex, summed in ascending eigenvalue order.
pub fn hks_energy(basis: &SpectralBasis, t: f64) -> Vec<f64> {
    let order = basis.order();
    let weights: Vec<f64> = order
        .iter()
        .map(|&c| (-basis.eigenvalues[c] * t).exp())
        .collect();
    (0..basis.n())
        .map(|r| {
            order
                .iter()
                .zip(&weights)
                .map(|(&c, w)| w * basis.phi[(r, c)].powi(2))
                .sum()
        })
        .collect()
}

/// `t_h = 4 ln 10 / λ₂`.
pub fn reference_time(basis: &SpectralBasis) -> Result<f64> {
    let lambda2 = basis.lambda2().unwrap_or(0.0);
    reference_time_from(lambda2)
}

pub fn reference_time_from(lambda2: f64) -> Result<f64> {
    if !(lambda2 > 1e-12) {
        return Err(SymmetryError::DegenerateSpectrum(format!(
            "λ₂ = {lambda2:e} is not positive"
        )));
    }
    Ok(four_ln10() / lambda2)
}

/// `count` log-uniform diffusion times on `[4 ln 10 / λ_k, 4 ln 10 / λ₂]`.
pub fn time_samples(basis: &SpectralBasis, count: usize) -> Result<Vec<f64>> {
    let t_max = reference_time(basis)?;
    let t_min = four_ln10() / basis.lambda_max();
    if count == 1 {
        return Ok(vec![t_max]);
    }
    let (lo, hi) = (t_min.ln(), t_max.ln());
    Ok((0..count)
        .map(|s| match s {
            0 => t_min,
            s if s == count - 1 => t_max,
            s => (lo + (hi - lo) * s as f64 / (count - 1) as f64).exp(),
        })
        .collect())
}

/// Detected HKS feature points with their descriptors and sign vectors.
#[derive(Debug, Clone, Serialize)]
pub struct FeatureSet {
    /// Feature vertex indices, by decreasing energy.
    pub indices: Vec<usize>,
    /// HKS energy at `t_h` for each feature.
    pub energies: Vec<f64>,
    /// `h × d` descriptor matrix; column `j` is the HKS of feature `j`.
    #[serde(skip)]
    pub hks: DMatrix<f64>,
    /// `signs[j][i]` is the sign of eigenfunction column `i` at feature `j`.
    pub signs: Vec<Vec<i8>>,
    pub t_h: f64,
    pub time_samples: Vec<f64>,
}

impl FeatureSet {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Euclidean distance between the HKS descriptors of features `a` and `b`.
    pub fn hks_distance(&self, a: usize, b: usize) -> f64 {
        (self.hks.column(a) - self.hks.column(b)).norm()
    }
}

#[derive(Debug, Clone)]
pub struct FeatureOptions {
    pub d_max: usize,
    pub time_steps: usize,
    /// Neighbourhood radius (in edge hops) for the local-maximum test.
    pub ring: usize,
    /// Maxima within this many edge hops of a mesh boundary are dropped;
    /// `None` keeps them. Has no effect on closed meshes.
    pub boundary_margin: Option<usize>,
}

impl Default for FeatureOptions {
    fn default() -> Self {
        Self {
            d_max: DEFAULT_D_MAX,
            time_steps: DEFAULT_TIME_STEPS,
            ring: 2,
            boundary_margin: Some(DEFAULT_BOUNDARY_MARGIN),
        }
    }
}

/// Vertices whose value strictly exceeds every vertex within `ring` hops,
/// sorted by decreasing value and then increasing index.
pub fn local_maxima(adj: &AdjacencyIndex, field: &[f64], ring: usize) -> Vec<usize> {
    let mut maxima: Vec<usize> = (0..field.len())
        .filter(|&v| {
            let bar = field[v] - STRICT_MAX_MARGIN * field[v].abs();
            adj.k_ring(v, ring).iter().all(|&w| field[w] < bar)
        })
        .collect();
    maxima.sort_by(|&a, &b| field[b].total_cmp(&field[a]).then(a.cmp(&b)));
    maxima
}

/// Edge-hop distance from every vertex to the nearest boundary vertex;
/// `usize::MAX` everywhere on a closed mesh.
pub fn boundary_hops(adj: &AdjacencyIndex) -> Vec<usize> {
    let n = adj.n_vertices();
    let mut hops = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    for v in (0..n).filter(|&v| adj.is_boundary_vertex(v)) {
        hops[v] = 0;
        queue.push_back(v);
    }
    while let Some(u) = queue.pop_front() {
        for &w in adj.one_ring(u) {
            if hops[w] == usize::MAX {
                hops[w] = hops[u] + 1;
                queue.push_back(w);
            }
        }
    }
    hops
}

pub fn sign_of(value: f64) -> i8 {
    if value < 0.0 {
        -1
    } else {
        1
    }
}

pub fn detect_features(
    adj: &AdjacencyIndex,
    basis: &SpectralBasis,
    opts: &FeatureOptions,
) -> Result<FeatureSet> {
    if opts.d_max < 2 {
        return Err(SymmetryError::Config(format!(
            "d_max must be at least 2, got {}",
            opts.d_max
        )));
    }
    let t_h = reference_time(basis)?;
    let energy = hks_energy(basis, t_h);
    let mut indices = local_maxima(adj, &energy, opts.ring);
    if let Some(margin) = opts.boundary_margin {
        let hops = boundary_hops(adj);
        indices.retain(|&v| hops[v] > margin);
    }
    if indices.is_empty() {
        return Err(SymmetryError::NoFeatures);
    }
    indices.truncate(opts.d_max);
    features_at(basis, &indices, &energy, t_h, opts.time_steps)
}

/// Builds descriptors and sign vectors for a given list of feature vertices.
pub fn features_at(
    basis: &SpectralBasis,
    indices: &[usize],
    energy: &[f64],
    t_h: f64,
    time_steps: usize,
) -> Result<FeatureSet> {
    let times = time_samples(basis, time_steps)?;
    let order = basis.order();
    let d = indices.len();
    let mut hks = DMatrix::zeros(times.len(), d);
    for (s, &t) in times.iter().enumerate() {
        let weights: Vec<f64> = order
            .iter()
            .map(|&c| (-basis.eigenvalues[c] * t).exp())
            .collect();
        for (j, &v) in indices.iter().enumerate() {
            hks[(s, j)] = order
                .iter()
                .zip(&weights)
                .map(|(&c, w)| w * basis.phi[(v, c)].powi(2))
                .sum();
        }
    }
    let signs = indices
        .iter()
        .map(|&v| (0..basis.k()).map(|c| sign_of(basis.phi[(v, c)])).collect())
        .collect();
    Ok(FeatureSet {
        indices: indices.to_vec(),
        energies: indices.iter().map(|&v| energy[v]).collect(),
        hks,
        signs,
        t_h,
        time_samples: times,
    })
}

/// Average fraction of the lowest `count` eigenfunctions whose signs agree at
/// the two endpoints of a mesh edge. Values near 1 mean nodal sets are sparse.
pub fn edge_sign_agreement(edges: &[(usize, usize)], basis: &SpectralBasis, count: usize) -> f64 {
    let cols: Vec<usize> = basis.order().into_iter().take(count).collect();
    if edges.is_empty() || cols.is_empty() {
        return 1.0;
    }
    let total: f64 = edges
        .iter()
        .map(|&(a, b)| {
            let agree = cols
                .iter()
                .filter(|&&c| sign_of(basis.phi[(a, c)]) == sign_of(basis.phi[(b, c)]))
                .count();
            agree as f64 / cols.len() as f64
        })
        .sum();
    total / edges.len() as f64
}
