//! Basis correction on SO(k').
//!
//! Finds a rotation `R` of the active eigenbasis that keeps `RᵀDR` close to
//! the diagonal eigenvalue matrix `D` while making the indicator functions of
//! detected pairs map onto each other through the sign matrix `C`:
//!
//! ```text
//! f(R) = off(RᵀDR) + ‖RᵀDR − D‖²_F + μ‖RᵀF̄ − CRᵀḠ‖²_F
//! ```
//!
//! minimised with a Riemannian trust-region method (truncated CG inner
//! solver, QR retraction).

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Result, SymmetryError};
use crate::functional_map::FunctionalMap;
use crate::spectral::SpectralBasis;

pub const DEFAULT_MU: f64 = 1.0;
pub const DEFAULT_MAX_ITER: usize = 200;
pub const DEFAULT_TOL_GRAD: f64 = 1e-7;

/// Data of the rotation problem, restricted to the active eigenfunctions.
#[derive(Debug, Clone)]
pub struct CorrectionProblem {
    /// Diagonal of `D` (active eigenvalues).
    pub eigenvalues: Vec<f64>,
    /// Diagonal of `C` (±1).
    pub signs: Vec<f64>,
    /// `ΦᵀF`: `k' × 2c`.
    pub fbar: DMatrix<f64>,
    /// `ΦᵀG`: `k' × 2c`.
    pub gbar: DMatrix<f64>,
    pub mu: f64,
}

/// Split of the objective into its three terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostTerms {
    pub off_diagonal: f64,
    pub eigenvalue_drift: f64,
    pub constraint: f64,
    pub total: f64,
}

impl CorrectionProblem {
    pub fn new(
        eigenvalues: Vec<f64>,
        signs: Vec<f64>,
        fbar: DMatrix<f64>,
        gbar: DMatrix<f64>,
        mu: f64,
    ) -> Result<Self> {
        let k = eigenvalues.len();
        if signs.len() != k || fbar.nrows() != k || gbar.shape() != fbar.shape() {
            return Err(SymmetryError::Dimension(format!(
                "inconsistent correction problem: k'={k}, C={}, F̄={:?}, Ḡ={:?}",
                signs.len(),
                fbar.shape(),
                gbar.shape()
            )));
        }
        if signs.iter().any(|&s| s != 1.0 && s != -1.0) {
            return Err(SymmetryError::DegenerateMap(
                "correction needs a ±1 sign matrix".into(),
            ));
        }
        Ok(Self {
            eigenvalues,
            signs,
            fbar,
            gbar,
            mu,
        })
    }

    /// Problem over the active columns of `map`, with `F = [f | g]` and
    /// `G = [g | f]` built from vertex indicators of the symmetric pairs.
    pub fn from_pairs(
        basis: &SpectralBasis,
        map: &FunctionalMap,
        vertex_pairs: &[(usize, usize)],
        mu: f64,
    ) -> Result<Self> {
        let active = &map.active;
        let k = active.len();
        let c = vertex_pairs.len();
        let mut fbar = DMatrix::zeros(k, 2 * c);
        let mut gbar = DMatrix::zeros(k, 2 * c);
        for (j, &(x, y)) in vertex_pairs.iter().enumerate() {
            for (r, &col) in active.iter().enumerate() {
                let (px, py) = (basis.phi[(x, col)], basis.phi[(y, col)]);
                fbar[(r, j)] = px;
                fbar[(r, c + j)] = py;
                gbar[(r, j)] = py;
                gbar[(r, c + j)] = px;
            }
        }
        Self::new(
            active.iter().map(|&c| basis.eigenvalues[c]).collect(),
            map.active_signs(),
            fbar,
            gbar,
            mu,
        )
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    fn d_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.eigenvalues))
    }

    /// `R` scaled on the right by `C` (column `j` times `c_j`).
    fn times_c(&self, m: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = m.clone();
        for (j, &s) in self.signs.iter().enumerate() {
            if s < 0.0 {
                out.column_mut(j).neg_mut();
            }
        }
        out
    }

    /// `S = F̄Ḡᵀ + ḠF̄ᵀ`.
    pub fn s_matrix(&self) -> DMatrix<f64> {
        let fg = &self.fbar * self.gbar.transpose();
        &fg + fg.transpose()
    }

    pub fn cost_terms(&self, r: &DMatrix<f64>) -> CostTerms {
        let k = self.dim();
        let x = r.transpose() * self.d_matrix() * r;
        let mut off = 0.0;
        let mut drift = 0.0;
        for i in 0..k {
            for j in 0..k {
                let v = x[(i, j)];
                if i != j {
                    off += v * v;
                    drift += v * v;
                } else {
                    drift += (v - self.eigenvalues[i]).powi(2);
                }
            }
        }
        let rt = r.transpose();
        let lhs = &rt * &self.fbar;
        let mut rhs = &rt * &self.gbar;
        for (i, &s) in self.signs.iter().enumerate() {
            if s < 0.0 {
                rhs.row_mut(i).neg_mut();
            }
        }
        let constraint = (lhs - rhs).norm_squared();
        CostTerms {
            off_diagonal: off,
            eigenvalue_drift: drift,
            constraint,
            total: off + drift + self.mu * constraint,
        }
    }

    pub fn cost(&self, r: &DMatrix<f64>) -> f64 {
        self.cost_terms(r).total
    }

    /// Gradient of the cost as a function on all `k' × k'` matrices.
    pub fn euclidean_gradient(&self, r: &DMatrix<f64>) -> DMatrix<f64> {
        let d = self.d_matrix();
        let dr = &d * r;
        let x = r.transpose() * &dr;
        let lambda_prime = DMatrix::from_diagonal(&x.diagonal());
        // off(X) = ‖X‖² − Σ X_ii²;   ‖X − D‖² = ‖X‖² − 2 tr(XD) + ‖D‖²
        let g1 = (&dr * &x - &dr * &lambda_prime) * 4.0;
        let g2 = (&dr * &x - &dr * &d) * 4.0;
        let gram = &self.fbar * self.fbar.transpose() + &self.gbar * self.gbar.transpose();
        let g3 = (&gram * r) * 2.0 - self.times_c(&(self.s_matrix() * r)) * 2.0;
        g1 + g2 + g3 * self.mu
    }

    /// Directional derivative of [`Self::euclidean_gradient`] along `xi`.
    pub fn euclidean_hessian(&self, r: &DMatrix<f64>, xi: &DMatrix<f64>) -> DMatrix<f64> {
        let d = self.d_matrix();
        let dr = &d * r;
        let dxi = &d * xi;
        let x = r.transpose() * &dr;
        let dx = xi.transpose() * &dr + r.transpose() * &dxi;
        let lambda_prime = DMatrix::from_diagonal(&x.diagonal());
        let dlambda_prime = DMatrix::from_diagonal(&dx.diagonal());
        let h1 = (&dxi * &x + &dr * &dx - &dxi * &lambda_prime - &dr * &dlambda_prime) * 4.0;
        let h2 = (&dxi * &x + &dr * &dx - &dxi * &d) * 4.0;
        let gram = &self.fbar * self.fbar.transpose() + &self.gbar * self.gbar.transpose();
        let h3 = (&gram * xi) * 2.0 - self.times_c(&(self.s_matrix() * xi)) * 2.0;
        h1 + h2 + h3 * self.mu
    }

    pub fn riemannian_gradient(&self, r: &DMatrix<f64>) -> DMatrix<f64> {
        project_tangent(r, &self.euclidean_gradient(r))
    }

    /// Riemannian Hessian on SO(k') viewed as an embedded submanifold:
    /// `P(∇²f[ξ] − ξ·sym(Rᵀ∇f))`.
    pub fn riemannian_hessian(&self, r: &DMatrix<f64>, xi: &DMatrix<f64>) -> DMatrix<f64> {
        let egrad = self.euclidean_gradient(r);
        let rtg = r.transpose() * &egrad;
        let sym = (&rtg + rtg.transpose()) * 0.5;
        project_tangent(r, &(self.euclidean_hessian(r, xi) - xi * sym))
    }
}

/// Orthogonal projection onto the tangent space at `R`: `R(RᵀX − XᵀR)/2`.
pub fn project_tangent(r: &DMatrix<f64>, x: &DMatrix<f64>) -> DMatrix<f64> {
    let rtx = r.transpose() * x;
    r * (&rtx - rtx.transpose()) * 0.5
}

/// QR retraction: the Q factor of `R + ξ`, with the triangular factor's
/// diagonal made positive.
pub fn retract(r: &DMatrix<f64>, xi: &DMatrix<f64>) -> DMatrix<f64> {
    let qr = (r + xi).qr();
    let mut q = qr.q();
    let tri = qr.r();
    for i in 0..q.ncols() {
        if tri[(i, i)] < 0.0 {
            q.column_mut(i).neg_mut();
        }
    }
    q
}

fn inner(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    a.dot(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HessianMode {
    /// Finite differences of the Riemannian gradient along the retraction.
    FiniteDifference,
    /// Closed-form Riemannian Hessian.
    Analytic,
}

#[derive(Debug, Clone)]
pub struct OptimizerOptions {
    pub max_iter: usize,
    pub tol_grad: f64,
    pub hessian: HessianMode,
    /// Initial trust-region radius as a fraction of the maximum radius.
    pub initial_radius_fraction: f64,
    /// Minimum ratio of actual to predicted decrease for accepting a step.
    pub accept_ratio: f64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self {
            max_iter: DEFAULT_MAX_ITER,
            tol_grad: DEFAULT_TOL_GRAD,
            hessian: HessianMode::FiniteDifference,
            initial_radius_fraction: 0.125,
            accept_ratio: 0.1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub cost: f64,
    pub grad_norm: f64,
    pub radius: f64,
    pub accepted: bool,
    pub inner_iterations: usize,
}

/// Result of [`optimize`].
#[derive(Debug, Clone, Serialize)]
pub struct RotationCorrection {
    #[serde(skip)]
    pub rotation: DMatrix<f64>,
    pub initial_cost: f64,
    pub final_cost: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    /// `false` when `max_iter` was reached before the gradient tolerance.
    pub converged: bool,
    pub trace: Vec<TraceEntry>,
}

impl RotationCorrection {
    pub fn identity(k: usize) -> Self {
        Self {
            rotation: DMatrix::identity(k, k),
            initial_cost: 0.0,
            final_cost: 0.0,
            grad_norm: 0.0,
            iterations: 0,
            converged: true,
            trace: Vec::new(),
        }
    }
}

fn hessian_vector(
    prob: &CorrectionProblem,
    r: &DMatrix<f64>,
    grad: &DMatrix<f64>,
    xi: &DMatrix<f64>,
    mode: HessianMode,
) -> DMatrix<f64> {
    match mode {
        HessianMode::Analytic => prob.riemannian_hessian(r, xi),
        HessianMode::FiniteDifference => {
            let norm = xi.norm();
            if norm == 0.0 {
                return DMatrix::zeros(xi.nrows(), xi.ncols());
            }
            let t = 2f64.powi(-14) / norm;
            let moved = retract(r, &(xi * t));
            let g_moved = prob.riemannian_gradient(&moved);
            // transport back by projection
            (project_tangent(r, &g_moved) - grad) / t
        }
    }
}

/// Steihaug-Toint truncated conjugate gradients on the trust-region model.
fn truncated_cg(
    prob: &CorrectionProblem,
    r: &DMatrix<f64>,
    grad: &DMatrix<f64>,
    radius: f64,
    mode: HessianMode,
) -> (DMatrix<f64>, DMatrix<f64>, usize) {
    let k = r.nrows();
    let max_inner = (k * (k - 1) / 2).max(1);
    let mut eta = DMatrix::zeros(k, k);
    let mut h_eta = DMatrix::zeros(k, k);
    let mut res = grad.clone();
    let r0 = res.norm();
    let mut delta = -res.clone();
    let mut rr = inner(&res, &res);
    let mut used = 0;
    for it in 0..max_inner {
        used = it + 1;
        let h_delta = hessian_vector(prob, r, grad, &delta, mode);
        let curv = inner(&delta, &h_delta);
        let (e_d, d_d, e_e) = (inner(&eta, &delta), inner(&delta, &delta), inner(&eta, &eta));
        // step length to the boundary along delta
        let to_boundary = || (-e_d + (e_d * e_d + d_d * (radius * radius - e_e)).sqrt()) / d_d;
        if curv <= 0.0 {
            let tau = to_boundary();
            eta += &delta * tau;
            h_eta += &h_delta * tau;
            break;
        }
        let alpha = rr / curv;
        let next = &eta + &delta * alpha;
        if next.norm() >= radius {
            let tau = to_boundary();
            eta += &delta * tau;
            h_eta += &h_delta * tau;
            break;
        }
        eta = next;
        h_eta += &h_delta * alpha;
        res += &h_delta * alpha;
        res = project_tangent(r, &res);
        let rr_new = inner(&res, &res);
        if rr_new.sqrt() <= r0 * r0.min(0.1) {
            break;
        }
        delta = -&res + &delta * (rr_new / rr);
        delta = project_tangent(r, &delta);
        rr = rr_new;
    }
    (eta, h_eta, used)
}

/// Riemannian trust-region minimisation of the correction cost from `r0`.
pub fn optimize(
    prob: &CorrectionProblem,
    r0: &DMatrix<f64>,
    opts: &OptimizerOptions,
) -> Result<RotationCorrection> {
    let k = prob.dim();
    if r0.shape() != (k, k) {
        return Err(SymmetryError::Dimension(format!(
            "initial rotation is {:?}, expected {k}x{k}",
            r0.shape()
        )));
    }
    if (r0.transpose() * r0 - DMatrix::identity(k, k)).norm() > 1e-8 || r0.determinant() <= 0.0 {
        return Err(SymmetryError::Numerical(
            "initial point is not a rotation".into(),
        ));
    }

    let max_radius = std::f64::consts::PI * (k as f64).sqrt();
    let mut radius = max_radius * opts.initial_radius_fraction;
    let mut r = r0.clone();
    let mut cost = prob.cost(&r);
    let initial_cost = cost;
    let mut trace = Vec::new();
    let mut grad = prob.riemannian_gradient(&r);
    let mut grad_norm = grad.norm();
    let mut iterations = 0;
    let mut converged = grad_norm <= opts.tol_grad;

    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let (eta, h_eta, inner_iterations) = truncated_cg(prob, &r, &grad, radius, opts.hessian);
        let predicted = -(inner(&grad, &eta) + 0.5 * inner(&eta, &h_eta));
        let candidate = retract(&r, &eta);
        let new_cost = prob.cost(&candidate);
        let actual = cost - new_cost;
        let rho = if predicted > 0.0 { actual / predicted } else { -1.0 };

        if rho < 0.25 {
            radius *= 0.25;
        } else if rho > 0.75 && (eta.norm() - radius).abs() <= 1e-8 * radius.max(1.0) + 1e-3 * radius {
            radius = (2.0 * radius).min(max_radius);
        }
        let accepted = rho > opts.accept_ratio && new_cost <= cost;
        if accepted {
            r = candidate;
            cost = new_cost;
            grad = prob.riemannian_gradient(&r);
            grad_norm = grad.norm();
        }
        trace.push(TraceEntry {
            iteration: iterations,
            cost,
            grad_norm,
            radius,
            accepted,
            inner_iterations,
        });
        converged = grad_norm <= opts.tol_grad;
        if radius < 1e-16 * max_radius {
            break;
        }
    }

    Ok(RotationCorrection {
        rotation: r,
        initial_cost,
        final_cost: cost,
        grad_norm,
        iterations,
        converged,
        trace,
    })
}
