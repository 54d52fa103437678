//! Validated triangle meshes and their basic area measures.

use crate::error::{Result, SymmetryError};

pub type Point3 = [f64; 3];

/// Relative factor applied to the squared bounding-box diagonal to obtain the
/// smallest admissible face area.
pub const DEGENERATE_AREA_FACTOR: f64 = 1e-12;

/// An immutable, validated triangle mesh.
///
/// Construction guarantees that every face references valid, pairwise
/// distinct vertices, has non-negligible area, and that the whole mesh forms
/// a single edge-connected component.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    vertices: Vec<Point3>,
    faces: Vec<[usize; 3]>,
    edges: Vec<(usize, usize)>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Point3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        if n == 0 {
            return Err(SymmetryError::validation("mesh", "no vertices"));
        }
        if faces.is_empty() {
            return Err(SymmetryError::validation("mesh", "no faces"));
        }
        for (fi, v) in vertices.iter().enumerate() {
            if v.iter().any(|c| !c.is_finite()) {
                return Err(SymmetryError::validation(
                    format!("vertex {fi}"),
                    "non-finite coordinate",
                ));
            }
        }
        for (fi, f) in faces.iter().enumerate() {
            if let Some(&bad) = f.iter().find(|&&i| i >= n) {
                return Err(SymmetryError::validation(
                    format!("face {fi}"),
                    format!("vertex index {bad} out of range [0, {n})"),
                ));
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(SymmetryError::validation(
                    format!("face {fi}"),
                    format!("repeated vertex in {:?}", f),
                ));
            }
        }

        let eps = DEGENERATE_AREA_FACTOR * bbox_diagonal(&vertices).powi(2);
        for (fi, f) in faces.iter().enumerate() {
            let a = triangle_area(&vertices[f[0]], &vertices[f[1]], &vertices[f[2]]);
            if !(a > eps) {
                return Err(SymmetryError::validation(
                    format!("face {fi}"),
                    format!("degenerate face (area {a:e} <= {eps:e})"),
                ));
            }
        }

        let mut edges: Vec<(usize, usize)> = faces
            .iter()
            .flat_map(|f| {
                [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])]
                    .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            })
            .collect();
        edges.sort_unstable();
        edges.dedup();

        let components = count_components(n, &edges);
        if components != 1 {
            return Err(SymmetryError::validation(
                "mesh",
                format!("disconnected mesh: {components} components"),
            ));
        }

        Ok(Self {
            vertices,
            faces,
            edges,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Unordered edges as `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn position(&self, v: usize) -> &Point3 {
        &self.vertices[v]
    }

    pub fn edge_length(&self, a: usize, b: usize) -> f64 {
        distance(&self.vertices[a], &self.vertices[b])
    }

    pub fn face_area(&self, f: usize) -> f64 {
        let [a, b, c] = self.faces[f];
        triangle_area(&self.vertices[a], &self.vertices[b], &self.vertices[c])
    }

    pub fn face_areas(&self) -> Vec<f64> {
        (0..self.faces.len()).map(|f| self.face_area(f)).collect()
    }

    /// Barycentric lumped area: one third of every incident face area.
    pub fn vertex_areas(&self) -> Vec<f64> {
        let mut areas = vec![0.0; self.vertices.len()];
        for (fi, f) in self.faces.iter().enumerate() {
            let third = self.face_area(fi) / 3.0;
            for &v in f {
                areas[v] += third;
            }
        }
        areas
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| self.face_area(f)).sum()
    }

    pub fn bbox_diagonal(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }

    /// Returns a copy with every position multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|p| [p[0] * s, p[1] * s, p[2] * s])
            .collect();
        Self::new(vertices, self.faces.clone())
    }

    /// Returns a copy with positions mapped through `f` and the same faces.
    pub fn map_positions(&self, f: impl Fn(&Point3) -> Point3) -> Result<Self> {
        Self::new(self.vertices.iter().map(f).collect(), self.faces.clone())
    }
}

pub(crate) fn sub(a: &Point3, b: &Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn dot(a: &Point3, b: &Point3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: &Point3, b: &Point3) -> Point3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn norm(a: &Point3) -> f64 {
    dot(a, a).sqrt()
}

pub fn distance(a: &Point3, b: &Point3) -> f64 {
    norm(&sub(a, b))
}

pub fn triangle_area(a: &Point3, b: &Point3, c: &Point3) -> f64 {
    0.5 * norm(&cross(&sub(b, a), &sub(c, a)))
}

fn bbox_diagonal(vertices: &[Point3]) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in vertices {
        for d in 0..3 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    distance(&lo, &hi)
}

fn count_components(n: usize, edges: &[(usize, usize)]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = n;
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
            components -= 1;
        }
    }
    components
}
