use crate::error::{Result, SymmetryError};
use crate::mesh::TriangleMesh;

/// Faces incident to an edge: two for interior edges, one on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeFaces {
    Boundary(usize),
    Interior(usize, usize),
}

impl EdgeFaces {
    pub fn is_boundary(&self) -> bool {
        matches!(self, Self::Boundary(_))
    }

    pub fn faces(&self) -> impl Iterator<Item = usize> {
        let (a, b) = match *self {
            Self::Boundary(f) => (f, None),
            Self::Interior(f, g) => (f, Some(g)),
        };
        std::iter::once(a).chain(b)
    }
}

/// Vertex and edge incidence tables for a [`TriangleMesh`].
#[derive(Debug, Clone)]
pub struct AdjacencyIndex {
    one_ring: Vec<Vec<usize>>,
    vertex_faces: Vec<Vec<usize>>,
    /// Parallel to `TriangleMesh::edges()`.
    edges: Vec<(usize, usize)>,
    edge_faces: Vec<EdgeFaces>,
}

impl AdjacencyIndex {
    pub fn build(mesh: &TriangleMesh) -> Result<Self> {
        let n = mesh.n_vertices();
        let edges = mesh.edges().to_vec();
        let mut one_ring = vec![Vec::new(); n];
        for &(a, b) in &edges {
            one_ring[a].push(b);
            one_ring[b].push(a);
        }
        for ring in &mut one_ring {
            ring.sort_unstable();
        }

        let mut vertex_faces = vec![Vec::new(); n];
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); edges.len()];
        for (fi, f) in mesh.faces().iter().enumerate() {
            for &v in f {
                vertex_faces[v].push(fi);
            }
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[2], f[0])] {
                let key = if a < b { (a, b) } else { (b, a) };
                let e = edges
                    .binary_search(&key)
                    .expect("edge list is derived from faces");
                incident[e].push(fi);
            }
        }

        let mut edge_faces = Vec::with_capacity(edges.len());
        for (e, faces) in incident.iter().enumerate() {
            edge_faces.push(match faces.as_slice() {
                [f] => EdgeFaces::Boundary(*f),
                [f, g] => EdgeFaces::Interior(*f, *g),
                more => return Err(SymmetryError::NonManifold(edges[e].0, edges[e].1, more.len())),
            });
        }

        Ok(Self {
            one_ring,
            vertex_faces,
            edges,
            edge_faces,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.one_ring.len()
    }

    /// Sorted, duplicate-free neighbours of `v`.
    pub fn one_ring(&self, v: usize) -> &[usize] {
        &self.one_ring[v]
    }

    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.vertex_faces[v]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_faces(&self) -> &[EdgeFaces] {
        &self.edge_faces
    }

    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edges.binary_search(&key).ok()
    }

    pub fn faces_of_edge(&self, a: usize, b: usize) -> Option<EdgeFaces> {
        self.edge_index(a, b).map(|e| self.edge_faces[e])
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.one_ring[v]
            .iter()
            .any(|&w| self.faces_of_edge(v, w).is_some_and(|f| f.is_boundary()))
    }

    /// Vertices within `k` edge hops of `v`, excluding `v`, sorted.
    pub fn k_ring(&self, v: usize, k: usize) -> Vec<usize> {
        let mut seen = vec![v];
        let mut frontier = vec![v];
        for _ in 0..k {
            let mut next = Vec::new();
            for &u in &frontier {
                for &w in &self.one_ring[u] {
                    if !seen.contains(&w) {
                        seen.push(w);
                        next.push(w);
                    }
                }
            }
            frontier = next;
        }
        seen.swap_remove(0);
        seen.sort_unstable();
        seen
    }
}
