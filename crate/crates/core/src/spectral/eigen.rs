use std::io::{BufRead, Write};

use faer::linalg::solvers::Solve;
use faer::sparse::{SparseColMat, Triplet};
use faer::{Mat, Side};
use nalgebra::{DMatrix, SymmetricEigen};

use super::operator::LaplaceOperator;
use crate::error::{Result, SymmetryError};

/// Eigenvalues and A-orthonormal eigenfunctions of the generalized problem
/// `M φ = -λ A φ`.
///
/// Column `i` of `phi` is the eigenfunction for `eigenvalues[i]`. Bases
/// produced by [`eigendecompose`] are sorted ascending, but consumers never
/// rely on column order.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralBasis {
    pub eigenvalues: Vec<f64>,
    pub phi: DMatrix<f64>,
}

impl SpectralBasis {
    pub fn from_parts(eigenvalues: Vec<f64>, phi: DMatrix<f64>) -> Result<Self> {
        if eigenvalues.len() != phi.ncols() {
            return Err(SymmetryError::Dimension(format!(
                "{} eigenvalues for {} eigenfunctions",
                eigenvalues.len(),
                phi.ncols()
            )));
        }
        Ok(Self { eigenvalues, phi })
    }

    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n(&self) -> usize {
        self.phi.nrows()
    }

    /// Column indices in ascending eigenvalue order.
    pub fn order(&self) -> Vec<usize> {
        super::ascending_order(&self.eigenvalues)
    }

    /// Smallest nonzero-index eigenvalue in ascending order (λ₂).
    pub fn lambda2(&self) -> Option<f64> {
        self.order().get(1).map(|&c| self.eigenvalues[c])
    }

    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Copy with columns reordered so that new column `i` is old column `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let eigenvalues = perm.iter().map(|&p| self.eigenvalues[p]).collect();
        let phi = DMatrix::from_fn(self.n(), perm.len(), |r, c| self.phi[(r, perm[c])]);
        Self { eigenvalues, phi }
    }

    /// Copy with the sign of column `col` flipped.
    pub fn flipped(&self, col: usize) -> Self {
        let mut out = self.clone();
        out.phi.column_mut(col).neg_mut();
        out
    }

    /// Largest entry-wise deviation of `ΦᵀAΦ` from the identity.
    pub fn orthonormality_error(&self, mass: &[f64]) -> f64 {
        let k = self.k();
        let mut worst: f64 = 0.0;
        for a in 0..k {
            for b in a..k {
                let g: f64 = (0..self.n())
                    .map(|r| self.phi[(r, a)] * mass[r] * self.phi[(r, b)])
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((g - target).abs());
            }
        }
        worst
    }

    /// `‖Mφᵢ + λᵢAφᵢ‖₂ / ‖Aφᵢ‖₂` for every column.
    pub fn residuals(&self, op: &LaplaceOperator) -> Vec<f64> {
        let n = self.n();
        let mut mx = vec![0.0; n];
        (0..self.k())
            .map(|i| {
                let x: Vec<f64> = self.phi.column(i).iter().copied().collect();
                op.stiffness.mul_vec(&x, &mut mx);
                let (mut r2, mut a2) = (0.0, 0.0);
                for j in 0..n {
                    let ax = op.mass[j] * x[j];
                    r2 += (mx[j] + self.eigenvalues[i] * ax).powi(2);
                    a2 += ax * ax;
                }
                (r2 / a2).sqrt()
            })
            .collect()
    }

    /// Writes the text dump: a `n k` header, one line of eigenvalues, then
    /// `n` rows of `k` eigenfunction values.
    pub fn write_text(&self, mut w: impl Write) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n(), self.k())?;
        let line: Vec<String> = self.eigenvalues.iter().map(|l| format!("{l:.17e}")).collect();
        writeln!(w, "{}", line.join(" "))?;
        for r in 0..self.n() {
            let row: Vec<String> = (0..self.k())
                .map(|c| format!("{:.17e}", self.phi[(r, c)]))
                .collect();
            writeln!(w, "{}", row.join(" "))?;
        }
        Ok(())
    }

    pub fn read_text(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let mut next = |what: &str| -> Result<(usize, Vec<f64>)> {
            let (i, line) = lines.next().ok_or_else(|| SymmetryError::Parse {
                line: 0,
                message: format!("missing {what}"),
            })?;
            let line = line.map_err(|e| SymmetryError::Parse {
                line: i + 1,
                message: e.to_string(),
            })?;
            let vals = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| SymmetryError::Parse {
                        line: i + 1,
                        message: format!("invalid number `{t}`"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((i + 1, vals))
        };
        let (hl, header) = next("header")?;
        if header.len() != 2 {
            return Err(SymmetryError::Parse {
                line: hl,
                message: "header must be `n k`".into(),
            });
        }
        let (n, k) = (header[0] as usize, header[1] as usize);
        let (el, eigenvalues) = next("eigenvalues")?;
        if eigenvalues.len() != k {
            return Err(SymmetryError::Parse {
                line: el,
                message: format!("expected {k} eigenvalues"),
            });
        }
        let mut phi = DMatrix::zeros(n, k);
        for r in 0..n {
            let (l, row) = next("eigenfunction row")?;
            if row.len() != k {
                return Err(SymmetryError::Parse {
                    line: l,
                    message: format!("expected {k} values"),
                });
            }
            for (c, v) in row.into_iter().enumerate() {
                phi[(r, c)] = v;
            }
        }
        Ok(Self { eigenvalues, phi })
    }
}

/// Solver settings for [`eigendecompose_with`].
#[derive(Debug, Clone)]
pub struct EigenOptions {
    /// Meshes with at most this many vertices use the dense solver.
    pub dense_threshold: usize,
    /// Block size of the shift-invert Krylov iteration; must exceed the
    /// largest eigenvalue multiplicity among the wanted pairs.
    pub block_size: usize,
    /// Convergence target for the residual `‖Wx − λAx‖ / ‖Ax‖`, relative to
    /// `max(1, λ_k)`.
    pub tolerance: f64,
    /// Upper bound on the Krylov subspace dimension.
    pub max_subspace: usize,
    /// Seed of the deterministic start block.
    pub seed: u64,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self {
            dense_threshold: 1000,
            block_size: 8,
            tolerance: 1e-10,
            max_subspace: 600,
            seed: 0x5EED,
        }
    }
}

pub fn eigendecompose(op: &LaplaceOperator, k: usize) -> Result<SpectralBasis> {
    eigendecompose_with(op, k, &EigenOptions::default())
}

/// Computes the `k` smallest eigenpairs of `W φ = λ A φ` with `W = -M`.
pub fn eigendecompose_with(
    op: &LaplaceOperator,
    k: usize,
    opts: &EigenOptions,
) -> Result<SpectralBasis> {
    let n = op.dim();
    if k == 0 || k >= n {
        return Err(SymmetryError::Dimension(format!(
            "requested {k} eigenpairs from a {n}-vertex mesh (need 0 < k < n)"
        )));
    }
    let (mut values, mut vectors) = if n <= opts.dense_threshold {
        dense_solve(op, k)?
    } else {
        krylov_solve(op, k, opts)?
    };

    // Rayleigh quotients against the unshifted operator, then sort and fix signs.
    let mut wx = vec![0.0; n];
    for (x, lambda) in vectors.iter_mut().zip(values.iter_mut()) {
        let norm2: f64 = x.iter().zip(&op.mass).map(|(v, a)| v * v * a).sum();
        let s = norm2.sqrt();
        x.iter_mut().for_each(|v| *v /= s);
        op.stiffness.mul_vec(x, &mut wx);
        *lambda = -x.iter().zip(&wx).map(|(a, b)| a * b).sum::<f64>();
    }
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let eigenvalues: Vec<f64> = idx.iter().map(|&i| values[i].max(0.0)).collect();
    let mut phi = DMatrix::zeros(n, k);
    for (c, &i) in idx.iter().enumerate() {
        let x = &vectors[i];
        let mut pivot = 0;
        for (r, v) in x.iter().enumerate() {
            if v.abs() > x[pivot].abs() {
                pivot = r;
            }
        }
        let sign = if x[pivot] < 0.0 { -1.0 } else { 1.0 };
        for (r, v) in x.iter().enumerate() {
            phi[(r, c)] = sign * v;
        }
    }
    Ok(SpectralBasis { eigenvalues, phi })
}

type Pairs = (Vec<f64>, Vec<Vec<f64>>);

/// Symmetric reduction `A^{-1/2} W A^{-1/2}` and a dense eigensolve.
fn dense_solve(op: &LaplaceOperator, k: usize) -> Result<Pairs> {
    let n = op.dim();
    let inv_sqrt: Vec<f64> = op.mass.iter().map(|a| 1.0 / a.sqrt()).collect();
    let mut b = Mat::<f64>::zeros(n, n);
    for (i, j, v) in op.stiffness.triplets() {
        b[(i, j)] = -v * inv_sqrt[i] * inv_sqrt[j];
    }
    let eig = b
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| SymmetryError::Convergence(format!("dense eigensolver: {e:?}")))?;
    let s = eig.S().column_vector();
    let u = eig.U();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| s[a].total_cmp(&s[b]));
    let values = idx[..k].iter().map(|&i| s[i]).collect();
    let vectors = idx[..k]
        .iter()
        .map(|&c| (0..n).map(|r| u[(r, c)] * inv_sqrt[r]).collect())
        .collect();
    Ok((values, vectors))
}

fn splitmix(state: &mut u64) -> f64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
}

fn a_dot(x: &[f64], y: &[f64], mass: &[f64]) -> f64 {
    x.iter().zip(y).zip(mass).map(|((a, b), m)| a * b * m).sum()
}

/// Block Krylov iteration on `(W + εI)⁻¹A`, self-adjoint in the A-inner
/// product, with full reorthogonalisation and Rayleigh-Ritz extraction.
/// The kernel of `W` (constants, since the mesh is connected) is deflated:
/// it is returned as the first pair and the iteration runs in its
/// A-orthogonal complement.
fn krylov_solve(op: &LaplaceOperator, k: usize, opts: &EigenOptions) -> Result<Pairs> {
    let n = op.dim();
    let mass = &op.mass;
    let eps = 1e-10 * mass.iter().sum::<f64>() / n as f64;

    let triplets: Vec<Triplet<usize, usize, f64>> = op
        .stiffness
        .triplets()
        .filter(|&(i, j, _)| i >= j)
        .map(|(i, j, v)| {
            let shift = if i == j { eps } else { 0.0 };
            Triplet::new(i, j, -v + shift)
        })
        .collect();
    let shifted = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| SymmetryError::Numerical(format!("sparse assembly: {e:?}")))?;
    let llt = shifted
        .sp_cholesky(Side::Lower)
        .map_err(|e| SymmetryError::Numerical(format!("sparse Cholesky failed: {e:?}")))?;
    let apply = |block: &[Vec<f64>]| -> Vec<Vec<f64>> {
        let mut rhs = Mat::<f64>::from_fn(n, block.len(), |r, c| mass[r] * block[c][r]);
        llt.solve_in_place(rhs.as_mut());
        (0..block.len())
            .map(|c| (0..n).map(|r| rhs[(r, c)]).collect())
            .collect()
    };

    let b = opts.block_size.max(1);
    let max_dim = opts.max_subspace.min(n);
    let mut seed = opts.seed;
    let constant = vec![1.0 / mass.iter().sum::<f64>().sqrt(); n];
    let wanted = k - 1;
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut images: Vec<Vec<f64>> = Vec::new();
    let mut block: Vec<Vec<f64>> = (0..b)
        .map(|_| (0..n).map(|_| splitmix(&mut seed)).collect())
        .collect();
    let mut last_residual = f64::INFINITY;

    loop {
        // orthonormalise the candidate block against the basis and itself
        let mut accepted = Vec::new();
        for mut v in block {
            let start = a_dot(&v, &v, mass).sqrt();
            for _ in 0..2 {
                for q in std::iter::once(&constant).chain(&basis).chain(&accepted) {
                    let c = a_dot(q, &v, mass);
                    v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
                }
            }
            let norm = a_dot(&v, &v, mass).sqrt();
            if norm > 1e-10 * start && norm > 0.0 {
                v.iter_mut().for_each(|x| *x /= norm);
                accepted.push(v);
            }
            if basis.len() + accepted.len() >= max_dim {
                break;
            }
        }
        if accepted.is_empty() {
            return Err(SymmetryError::Convergence(format!(
                "Krylov space exhausted at dimension {} (residual {last_residual:e})",
                basis.len()
            )));
        }
        let new_images = apply(&accepted);
        basis.extend(accepted);
        images.extend(new_images.iter().cloned());
        block = new_images;

        let m = basis.len();
        if wanted == 0 {
            break Ok((vec![0.0], vec![constant]));
        }
        if m < wanted + b && m < max_dim {
            continue;
        }

        // Rayleigh-Ritz: T = Vᵀ A (W+εA)⁻¹ A V
        let t = DMatrix::from_fn(m, m, |i, j| a_dot(&basis[i], &images[j], mass));
        let t = (&t + t.transpose()) * 0.5;
        let eig = SymmetricEigen::new(t);
        let mut idx: Vec<usize> = (0..m).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

        let mut values = vec![0.0];
        let mut vectors = vec![constant.clone()];
        let mut worst: f64 = 0.0;
        let mut wx = vec![0.0; n];
        for &i in &idx[..wanted] {
            let y = eig.eigenvectors.column(i);
            let mut x = vec![0.0; n];
            for (q, &c) in basis.iter().zip(y.iter()) {
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi += c * qi);
            }
            op.stiffness.mul_vec(&x, &mut wx);
            let lambda = -x.iter().zip(&wx).map(|(a, b)| a * b).sum::<f64>() / a_dot(&x, &x, mass);
            let (mut r2, mut a2) = (0.0, 0.0);
            for j in 0..n {
                let ax = mass[j] * x[j];
                r2 += (-wx[j] - lambda * ax).powi(2);
                a2 += ax * ax;
            }
            worst = worst.max((r2 / a2).sqrt());
            values.push(lambda);
            vectors.push(x);
        }
        let scale = values.iter().copied().fold(1.0, f64::max);
        last_residual = worst;
        if worst <= opts.tolerance * scale {
            break Ok((values, vectors));
        }
        if m >= max_dim {
            return Err(SymmetryError::Convergence(format!(
                "no convergence within subspace dimension {m} (residual {worst:e})"
            )));
        }
    }
}
