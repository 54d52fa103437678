//! Parity of each eigenfunction under the symmetry, i.e. the diagonal of the
//! functional map `C`.
//!
//! For a reflective self-isometry `T`, every eigenfunction with a simple
//! eigenvalue satisfies `φ∘T = ±φ`, so `C` is diagonal with ±1 entries. The
//! parity is read off from the restriction of `φ` to shortest paths between
//! symmetric points: the restriction is a palindrome for even functions and
//! an anti-palindrome for odd ones.

use serde::Serialize;

use crate::error::{Result, SymmetryError};
use crate::geodesics::GeodesicPath;
use crate::spectral::SpectralBasis;

pub const DEFAULT_EPS_SIGN: f64 = 1e-6;
pub const DEFAULT_MIN_ACTIVE: usize = 3;

/// Outcome of the parity vote for one eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignVote {
    pub sign: i8,
    /// `|Σ pᵀ flip(p)| / Σ ‖p‖²`, in [0, 1].
    pub confidence: f64,
}

/// Votes on the parity of eigenfunction column `col`:
/// `sign(Σⱼ pⱼᵀ reverse(pⱼ))`, or 0 when the sum is negligible.
pub fn eigenfunction_sign(
    basis: &SpectralBasis,
    paths: &[GeodesicPath],
    col: usize,
    eps_sign: f64,
) -> SignVote {
    let (mut sum, mut energy) = (0.0, 0.0);
    for path in paths {
        let v = &path.vertices;
        let m = v.len();
        for (a, &va) in v.iter().enumerate() {
            let x = basis.phi[(va, col)];
            sum += x * basis.phi[(v[m - 1 - a], col)];
            energy += x * x;
        }
    }
    vote(sum, energy, eps_sign)
}

fn vote(sum: f64, energy: f64, eps_sign: f64) -> SignVote {
    let confidence = if energy > 0.0 { sum.abs() / energy } else { 0.0 };
    let sign = if sum == 0.0 || sum.abs() < eps_sign * energy {
        0
    } else if sum > 0.0 {
        1
    } else {
        -1
    };
    SignVote { sign, confidence }
}

/// Parity vote on explicit restricted vectors (one per path).
pub fn restricted_sign(restrictions: &[Vec<f64>], eps_sign: f64) -> SignVote {
    let (mut sum, mut energy) = (0.0, 0.0);
    for p in restrictions {
        sum += p.iter().zip(p.iter().rev()).map(|(a, b)| a * b).sum::<f64>();
        energy += p.iter().map(|a| a * a).sum::<f64>();
    }
    vote(sum, energy, eps_sign)
}

/// Diagonal functional map. `signs[i]` is the parity of eigenfunction column
/// `i` (0 when excluded).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalMap {
    pub signs: Vec<i8>,
    pub confidence: Vec<f64>,
    /// Columns with nonzero sign and no eigen-gap flag, in ascending
    /// eigenvalue order.
    pub active: Vec<usize>,
}

impl FunctionalMap {
    pub fn k(&self) -> usize {
        self.signs.len()
    }

    /// Dense `k × k` diagonal matrix `C`.
    pub fn matrix(&self) -> nalgebra::DMatrix<f64> {
        let d: Vec<f64> = self.signs.iter().map(|&s| s as f64).collect();
        nalgebra::DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d))
    }

    pub fn active_signs(&self) -> Vec<f64> {
        self.active.iter().map(|&c| self.signs[c] as f64).collect()
    }
}

#[derive(Debug, Clone)]
pub struct MapOptions {
    pub eps_sign: f64,
    pub min_active: usize,
}

impl Default for MapOptions {
    fn default() -> Self {
        Self {
            eps_sign: DEFAULT_EPS_SIGN,
            min_active: DEFAULT_MIN_ACTIVE,
        }
    }
}

/// Assembles the diagonal of `C` from geodesic parity votes. Flagged
/// (near-repeated) eigenvalues get sign 0; the lowest eigenfunction, which is
/// constant, is always even.
pub fn build_functional_map(
    basis: &SpectralBasis,
    paths: &[GeodesicPath],
    gap_flags: &[bool],
    opts: &MapOptions,
) -> Result<FunctionalMap> {
    let k = basis.k();
    if gap_flags.len() != k {
        return Err(SymmetryError::Dimension(format!(
            "{} gap flags for {k} eigenfunctions",
            gap_flags.len()
        )));
    }
    if paths.is_empty() {
        return Err(SymmetryError::DegenerateMap("no symmetric pairs".into()));
    }
    let order = basis.order();
    let constant = order[0];
    let mut signs = vec![0i8; k];
    let mut confidence = vec![0.0; k];
    for col in 0..k {
        let v = eigenfunction_sign(basis, paths, col, opts.eps_sign);
        confidence[col] = v.confidence;
        signs[col] = if col == constant {
            1
        } else if gap_flags[col] {
            0
        } else {
            v.sign
        };
    }
    let active: Vec<usize> = order
        .iter()
        .copied()
        .filter(|&c| signs[c] != 0 && (c == constant || !gap_flags[c]))
        .collect();
    if active.len() < opts.min_active {
        return Err(SymmetryError::DegenerateMap(format!(
            "only {} usable eigenfunctions (need {})",
            active.len(),
            opts.min_active
        )));
    }
    Ok(FunctionalMap {
        signs,
        confidence,
        active,
    })
}

/// `⟨φᵢ∘π, φᵢ⟩_A` for every column, given a known vertex involution `π`.
/// For exact symmetries with simple eigenvalues this is ±1.
pub fn parity_oracle(basis: &SpectralBasis, mass: &[f64], involution: &[usize]) -> Vec<f64> {
    (0..basis.k())
        .map(|c| {
            (0..basis.n())
                .map(|r| basis.phi[(involution[r], c)] * mass[r] * basis.phi[(r, c)])
                .sum()
        })
        .collect()
}
