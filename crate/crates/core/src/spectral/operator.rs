use crate::error::{Result, SymmetryError};
use crate::mesh::{cross, dot, norm, sub, TriangleMesh};

/// Compressed sparse row matrix with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl CsrMatrix {
    /// Builds an `n × n` matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(n: usize, mut triplets: Vec<(usize, usize, f64)>) -> Self {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols: Vec<usize> = Vec::with_capacity(triplets.len());
        let mut vals: Vec<f64> = Vec::with_capacity(triplets.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in triplets {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                vals.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.cols[r.clone()].binary_search(&j) {
            Ok(p) => self.vals[r.start + p],
            Err(_) => 0.0,
        }
    }

    pub fn mul_vec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Cotangent stiffness matrix `M` and lumped mass diagonal `A`; the discrete
/// Laplace-Beltrami operator is `L = -A⁻¹M`.
///
/// `M` has off-diagonal entries `(cot α + cot β)/2` on mesh edges (a single
/// cotangent on boundary edges) and diagonal entries equal to the negated
/// off-diagonal row sum, so it is negative semi-definite on Delaunay meshes.
#[derive(Debug, Clone)]
pub struct LaplaceOperator {
    pub stiffness: CsrMatrix,
    pub mass: Vec<f64>,
}

impl LaplaceOperator {
    pub fn assemble(mesh: &TriangleMesh) -> Result<Self> {
        let n = mesh.n_vertices();
        let verts = mesh.vertices();
        let mut triplets = Vec::with_capacity(mesh.n_faces() * 6 + n);
        let mut diag = vec![0.0; n];
        for (fi, f) in mesh.faces().iter().enumerate() {
            for k in 0..3 {
                let (o, a, b) = (f[k], f[(k + 1) % 3], f[(k + 2) % 3]);
                let u = sub(&verts[a], &verts[o]);
                let v = sub(&verts[b], &verts[o]);
                let cot = dot(&u, &v) / norm(&cross(&u, &v));
                if !cot.is_finite() {
                    return Err(SymmetryError::Numerical(format!(
                        "non-finite cotangent at corner {o} of face {fi}"
                    )));
                }
                let w = 0.5 * cot;
                triplets.push((a, b, w));
                triplets.push((b, a, w));
                diag[a] -= w;
                diag[b] -= w;
            }
        }
        triplets.extend(diag.iter().enumerate().map(|(i, &d)| (i, i, d)));
        Ok(Self {
            stiffness: CsrMatrix::from_triplets(n, triplets),
            mass: mesh.vertex_areas(),
        })
    }

    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    /// Cotangent weight `M[a, b]` of an edge.
    pub fn weight(&self, a: usize, b: usize) -> f64 {
        self.stiffness.get(a, b)
    }
}
