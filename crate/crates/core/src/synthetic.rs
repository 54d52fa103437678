//! Procedural meshes with known structure: simple solids for unit tests and
//! mirror-welded surfaces with an exact combinatorial involution for
//! end-to-end checks.

use std::collections::HashMap;

use crate::error::{Result, SymmetryError};
use crate::mesh::{Point3, TriangleMesh};

/// A mesh together with its exact mirror involution (vertex permutation).
#[derive(Debug, Clone)]
pub struct MirroredMesh {
    pub mesh: TriangleMesh,
    pub involution: Vec<usize>,
}

impl MirroredMesh {
    /// Ground-truth pairs `(j, π(j))` for every vertex.
    pub fn ground_truth(&self) -> Vec<(usize, usize)> {
        self.involution.iter().copied().enumerate().collect()
    }

    /// Drops the faces selected by `remove` along with the vertices left
    /// unreferenced. Returns the cut mesh and the ground-truth pairs whose
    /// endpoints both survive, in the new indexing.
    pub fn remove_faces(
        &self,
        mut remove: impl FnMut(usize) -> bool,
    ) -> Result<(TriangleMesh, Vec<(usize, usize)>)> {
        let n = self.mesh.n_vertices();
        let kept: Vec<[usize; 3]> = (0..self.mesh.n_faces())
            .filter(|&f| !remove(f))
            .map(|f| self.mesh.faces()[f])
            .collect();
        let mut used = vec![false; n];
        kept.iter().flatten().for_each(|&v| used[v] = true);
        let mut new_index = vec![usize::MAX; n];
        let mut vertices = Vec::new();
        for v in (0..n).filter(|&v| used[v]) {
            new_index[v] = vertices.len();
            vertices.push(*self.mesh.position(v));
        }
        let faces = kept
            .iter()
            .map(|f| [new_index[f[0]], new_index[f[1]], new_index[f[2]]])
            .collect();
        let truth = (0..n)
            .filter_map(|j| {
                let (a, b) = (new_index[j], new_index[self.involution[j]]);
                (a != usize::MAX && b != usize::MAX).then_some((a, b))
            })
            .collect();
        Ok((TriangleMesh::new(vertices, faces)?, truth))
    }
}

/// Regular tetrahedron with unit edge length.
pub fn unit_tetrahedron() -> TriangleMesh {
    let s = 1.0 / (2.0 * 2f64.sqrt());
    TriangleMesh::new(
        vec![[s, s, s], [s, -s, -s], [-s, s, -s], [-s, -s, s]],
        vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]],
    )
    .expect("regular tetrahedron is valid")
}

/// Planar `nx × ny` vertex grid in the z = 0 plane with spacing `h`.
pub fn grid(nx: usize, ny: usize, h: f64) -> TriangleMesh {
    assert!(nx >= 2 && ny >= 2);
    let mut vertices = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            vertices.push([i as f64 * h, j as f64 * h, 0.0]);
        }
    }
    let mut faces = Vec::new();
    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let a = j * nx + i;
            let (b, c, d) = (a + 1, a + nx, a + nx + 1);
            faces.push([a, b, d]);
            faces.push([a, d, c]);
        }
    }
    TriangleMesh::new(vertices, faces).expect("grid is valid")
}

/// Geodesic sphere: icosahedron with `subdivisions` rounds of 1-to-4 splits,
/// projected onto the unit sphere.
pub fn icosphere(subdivisions: usize) -> TriangleMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<Point3> = vec![
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for p in &mut vertices {
        *p = normalize(*p);
    }
    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for f in &faces {
            let mut mid = [0usize; 3];
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                mid[k] = *midpoint.entry(key).or_insert_with(|| {
                    let (pa, pb) = (vertices[a], vertices[b]);
                    vertices.push(normalize([
                        pa[0] + pb[0],
                        pa[1] + pb[1],
                        pa[2] + pb[2],
                    ]));
                    vertices.len() - 1
                });
            }
            next.push([f[0], mid[0], mid[2]]);
            next.push([f[1], mid[1], mid[0]]);
            next.push([f[2], mid[2], mid[1]]);
            next.push(mid);
        }
        faces = next;
    }
    TriangleMesh::new(vertices, faces).expect("icosphere is valid")
}

fn normalize(p: Point3) -> Point3 {
    let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / r, p[1] / r, p[2] / r]
}

/// Reflects a half mesh across the plane x = 0 and welds the seam.
///
/// Every vertex of the half must satisfy x ≥ 0; vertices with |x| ≤ `seam_tol`
/// are treated as lying on the mirror plane and are shared by both halves.
/// Returns the welded mesh and the involution mapping each vertex to its
/// mirror image.
pub fn mirror_weld(
    half_vertices: &[Point3],
    half_faces: &[[usize; 3]],
    seam_tol: f64,
) -> Result<MirroredMesh> {
    let n_half = half_vertices.len();
    let mut vertices = Vec::with_capacity(2 * n_half);
    let mut mirror_of = vec![usize::MAX; n_half];
    for (i, p) in half_vertices.iter().enumerate() {
        if p[0] < -seam_tol {
            return Err(SymmetryError::validation(
                format!("vertex {i}"),
                "half mesh must lie in x >= 0",
            ));
        }
        vertices.push(if p[0].abs() <= seam_tol {
            [0.0, p[1], p[2]]
        } else {
            *p
        });
    }
    for (i, p) in half_vertices.iter().enumerate() {
        mirror_of[i] = if p[0].abs() <= seam_tol {
            i
        } else {
            vertices.push([-p[0], p[1], p[2]]);
            vertices.len() - 1
        };
    }
    let mut involution: Vec<usize> = (0..vertices.len()).collect();
    for (i, &m) in mirror_of.iter().enumerate() {
        involution[i] = m;
        involution[m] = i;
    }
    let mut faces = half_faces.to_vec();
    for f in half_faces {
        // reflection reverses orientation
        faces.push([mirror_of[f[0]], mirror_of[f[2]], mirror_of[f[1]]]);
    }
    Ok(MirroredMesh {
        mesh: TriangleMesh::new(vertices, faces)?,
        involution,
    })
}

/// Half (x ≥ 0) of a cube-sphere with `resolution` quads per cube edge
/// (`resolution` must be even), with positions given by `shape` applied to
/// unit directions. `shape` must commute with the x-reflection.
fn half_cube_sphere(
    resolution: usize,
    shape: &dyn Fn(Point3) -> Point3,
) -> (Vec<Point3>, Vec<[usize; 3]>) {
    let n = resolution as i64;
    let half = n / 2;
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut vertices = Vec::new();
    let mut faces = Vec::new();

    let mut vid = |c: [i64; 3], vertices: &mut Vec<Point3>| -> usize {
        *index.entry(c).or_insert_with(|| {
            // equal-angle cube-to-sphere map
            let u = c.map(|x| {
                let s = 2.0 * x as f64 / n as f64 - 1.0;
                (std::f64::consts::FRAC_PI_4 * s).tan()
            });
            let dir = normalize(u);
            let mut p = shape(dir);
            if c[0] == half {
                p[0] = 0.0;
            }
            vertices.push(p);
            vertices.len() - 1
        })
    };

    // each cube face: fixed axis, fixed value (0 or n), two free axes
    for axis in 0..3 {
        for &side in &[0, n] {
            let (ua, va) = ((axis + 1) % 3, (axis + 2) % 3);
            for a in 0..n {
                for b in 0..n {
                    let corner = |da: i64, db: i64| {
                        let mut c = [0i64; 3];
                        c[axis] = side;
                        c[ua] = a + da;
                        c[va] = b + db;
                        c
                    };
                    let quad = [corner(0, 0), corner(1, 0), corner(1, 1), corner(0, 1)];
                    if quad.iter().any(|c| c[0] < half) {
                        continue;
                    }
                    let q = quad.map(|c| vid(c, &mut vertices));
                    // outward orientation: (ua, va, axis) is right-handed
                    let outward = side == n;
                    let flip = (a + b) % 2 == 0;
                    let tris = if flip {
                        [[q[0], q[1], q[2]], [q[0], q[2], q[3]]]
                    } else {
                        [[q[0], q[1], q[3]], [q[1], q[2], q[3]]]
                    };
                    for t in tris {
                        faces.push(if outward { t } else { [t[0], t[2], t[1]] });
                    }
                }
            }
        }
    }
    (vertices, faces)
}

/// Builds a closed genus-0 surface symmetric under x ↦ −x by generating the
/// x ≥ 0 half of a deformed cube-sphere and mirror-welding it.
pub fn mirrored_surface(
    resolution: usize,
    shape: impl Fn(Point3) -> Point3,
) -> Result<MirroredMesh> {
    if resolution < 2 || resolution % 2 != 0 {
        return Err(SymmetryError::Config(format!(
            "cube-sphere resolution must be even and >= 2, got {resolution}"
        )));
    }
    let (v, f) = half_cube_sphere(resolution, &shape);
    mirror_weld(&v, &f, 0.0)
}

/// Vertex count of [`mirrored_blob`] / [`mirrored_surface`] at a resolution.
pub fn cube_sphere_vertex_count(resolution: usize) -> usize {
    6 * resolution * resolution + 2
}

/// Smallest even resolution whose cube-sphere has at least `n` vertices.
pub fn resolution_for_vertices(n: usize) -> usize {
    let mut r = 2;
    while cube_sphere_vertex_count(r) < n {
        r += 2;
    }
    r
}

fn bump(d: Point3, center: Point3, width: f64) -> f64 {
    let c = normalize(center);
    let dist2 = (d[0] - c[0]).powi(2) + (d[1] - c[1]).powi(2) + (d[2] - c[2]).powi(2);
    (-dist2 / (width * width)).exp()
}

/// Default test shape: an ellipsoid stretched along the mirror normal, with
/// mirrored pairs of protrusions. Its only isometry besides the identity is
/// the x-reflection. The stretch keeps the low eigenvalues well separated.
pub fn blob_shape(d: Point3) -> Point3 {
    let bumps: [(Point3, f64, f64); 4] = [
        ([0.55, 0.75, 0.25], 0.45, 0.35),
        ([0.45, -0.8, 0.35], 0.3, 0.4),
        ([0.9, 0.1, -0.4], 0.25, 0.3),
        ([0.0, 0.3, 0.95], 0.35, 0.35),
    ];
    let mut r = 1.0;
    for (c, amp, w) in bumps {
        let mirrored = [-c[0], c[1], c[2]];
        r += amp * bump(d, c, w);
        if c[0] != 0.0 {
            r += amp * bump(d, mirrored, w);
        }
    }
    [3.0 * d[0] * r, d[1] * r, 0.7 * d[2] * r]
}

/// Dumbbell: two mirrored bulbs joined by a thin neck along x.
pub fn dumbbell_shape(d: Point3) -> Point3 {
    let pinch = 1.0 - 0.7 * (-(d[0] / 0.35).powi(2)).exp();
    let asym = 1.0 + 0.15 * d[1] + 0.1 * d[2] * d[2];
    [2.0 * d[0], d[1] * pinch * asym, 0.8 * d[2] * pinch]
}

/// Default bilaterally symmetric test mesh at the given cube-sphere resolution.
pub fn mirrored_blob(resolution: usize) -> MirroredMesh {
    mirrored_surface(resolution, blob_shape).expect("blob is valid")
}

pub fn mirrored_dumbbell(resolution: usize) -> MirroredMesh {
    mirrored_surface(resolution, dumbbell_shape).expect("dumbbell is valid")
}
