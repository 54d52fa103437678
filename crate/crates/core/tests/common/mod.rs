#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use symmetria::mesh::{Point3, TriangleMesh};
use symmetria::synthetic::{blob_shape, MirroredMesh};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0))
}

/// Haar-ish random rotation: Q of a Gaussian-like matrix, with det fixed to +1.
pub fn random_rotation(rng: &mut impl Rng, k: usize) -> DMatrix<f64> {
    let qr = random_matrix(rng, k, k).qr();
    let mut q = qr.q();
    let tri = qr.r();
    for i in 0..k {
        if tri[(i, i)] < 0.0 {
            q.column_mut(i).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

pub fn random_skew(rng: &mut impl Rng, k: usize) -> DMatrix<f64> {
    let a = random_matrix(rng, k, k);
    (&a - a.transpose()) * 0.5
}

/// Correction cost written out term by term from its definition.
pub fn reference_cost(
    eigenvalues: &[f64],
    signs: &[f64],
    fbar: &DMatrix<f64>,
    gbar: &DMatrix<f64>,
    mu: f64,
    r: &DMatrix<f64>,
) -> f64 {
    let k = eigenvalues.len();
    let d = DMatrix::from_fn(k, k, |i, j| if i == j { eigenvalues[i] } else { 0.0 });
    let c = DMatrix::from_fn(k, k, |i, j| if i == j { signs[i] } else { 0.0 });
    let x = r.transpose() * &d * r;
    let mut off = 0.0;
    for i in 0..k {
        for j in 0..k {
            if i != j {
                off += x[(i, j)] * x[(i, j)];
            }
        }
    }
    let drift = (&x - &d).norm_squared();
    let constraint = (r.transpose() * fbar - &c * r.transpose() * gbar).norm_squared();
    off + drift + mu * constraint
}

fn centroid(mesh: &TriangleMesh, f: usize) -> Point3 {
    let [a, b, c] = mesh.faces()[f];
    let (pa, pb, pc) = (mesh.position(a), mesh.position(b), mesh.position(c));
    [
        (pa[0] + pb[0] + pc[0]) / 3.0,
        (pa[1] + pb[1] + pc[1]) / 3.0,
        (pa[2] + pb[2] + pc[2]) / 3.0,
    ]
}

/// Cuts a single hole on the x > 0 side of a blob: the faces nearest to the
/// blob point in unit direction `dir` are removed until `fraction` of the
/// surface area is gone.
pub fn cut_hole(
    blob: &MirroredMesh,
    dir: Point3,
    fraction: f64,
) -> (TriangleMesh, Vec<(usize, usize)>) {
    let mesh = &blob.mesh;
    let center = blob_shape(dir);
    let mut candidates: Vec<(f64, usize)> = (0..mesh.n_faces())
        .filter_map(|f| {
            let c = centroid(mesh, f);
            (c[0] > 0.0).then(|| (symmetria::mesh::distance(&c, &center), f))
        })
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    let budget = fraction * mesh.surface_area();
    let mut removed = vec![false; mesh.n_faces()];
    let mut area = 0.0;
    for (_, f) in candidates {
        let a = mesh.face_area(f);
        if area + a > budget {
            break;
        }
        area += a;
        removed[f] = true;
    }
    blob.remove_faces(|f| removed[f]).expect("cut mesh is valid")
}

/// Mid-flank direction at angle `theta` around the mirror normal.
pub fn flank_direction(theta: f64) -> Point3 {
    let s = (1.0f64 - 0.25).sqrt();
    [0.5, s * theta.cos(), s * theta.sin()]
}
