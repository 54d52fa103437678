//! Edge-graph shortest paths (Dijkstra) and eigenfunction restriction to them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::adjacency::AdjacencyIndex;
use crate::error::{Result, SymmetryError};
use crate::mesh::TriangleMesh;
use crate::spectral::SpectralBasis;

/// A vertex path along mesh edges.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicPath {
    pub vertices: Vec<usize>,
    pub length: f64,
}

impl GeodesicPath {
    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self {
            vertices,
            length: self.length,
        }
    }
}

#[derive(PartialEq)]
struct Entry {
    dist: f64,
    vertex: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    // reversed for a min-heap; equal distances pop the smaller vertex first
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.vertex.cmp(&self.vertex))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Reusable Dijkstra state over the mesh edge graph with Euclidean edge
/// weights. Only touched entries are reset between queries.
pub struct Dijkstra {
    neighbours: Vec<Vec<(usize, f64)>>,
    dist: Vec<f64>,
    pred: Vec<usize>,
    done: Vec<bool>,
    touched: Vec<usize>,
    heap: BinaryHeap<Entry>,
}

impl Dijkstra {
    pub fn new(mesh: &TriangleMesh, adj: &AdjacencyIndex) -> Self {
        let n = mesh.n_vertices();
        let neighbours = (0..n)
            .map(|v| {
                adj.one_ring(v)
                    .iter()
                    .map(|&w| (w, mesh.edge_length(v, w)))
                    .collect()
            })
            .collect();
        Self {
            neighbours,
            dist: vec![f64::INFINITY; n],
            pred: vec![usize::MAX; n],
            done: vec![false; n],
            touched: Vec::new(),
            heap: BinaryHeap::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.dist[v] = f64::INFINITY;
            self.pred[v] = usize::MAX;
            self.done[v] = false;
        }
        self.touched.clear();
        self.heap.clear();
    }

    /// Runs from `src` until `stop` is settled (or everything is, if `None`),
    /// giving up once the frontier exceeds `cutoff`.
    fn run(&mut self, src: usize, stop: Option<usize>, cutoff: f64) {
        self.reset();
        self.dist[src] = 0.0;
        self.touched.push(src);
        self.heap.push(Entry {
            dist: 0.0,
            vertex: src,
        });
        while let Some(Entry { dist, vertex }) = self.heap.pop() {
            if self.done[vertex] {
                continue;
            }
            if dist > cutoff {
                break;
            }
            self.done[vertex] = true;
            if Some(vertex) == stop {
                break;
            }
            for &(w, len) in &self.neighbours[vertex] {
                if self.done[w] {
                    continue;
                }
                let cand = dist + len;
                let old = self.dist[w];
                if old == f64::INFINITY {
                    self.touched.push(w);
                }
                if cand < old || (cand == old && vertex < self.pred[w]) {
                    self.dist[w] = cand;
                    self.pred[w] = vertex;
                    self.heap.push(Entry {
                        dist: cand,
                        vertex: w,
                    });
                }
            }
        }
    }

    pub fn shortest_path(&mut self, src: usize, dst: usize) -> Result<GeodesicPath> {
        self.run(src, Some(dst), f64::INFINITY);
        if !self.done[dst] {
            return Err(SymmetryError::Unreachable { src, dst });
        }
        let mut vertices = vec![dst];
        let mut v = dst;
        while v != src {
            v = self.pred[v];
            vertices.push(v);
        }
        vertices.reverse();
        Ok(GeodesicPath {
            vertices,
            length: self.dist[dst],
        })
    }

    /// Edge-graph distance between two vertices; `None` if it exceeds `cutoff`.
    pub fn distance_within(&mut self, src: usize, dst: usize, cutoff: f64) -> Option<f64> {
        if src == dst {
            return Some(0.0);
        }
        self.run(src, Some(dst), cutoff);
        self.done[dst].then(|| self.dist[dst])
    }

    pub fn distance(&mut self, src: usize, dst: usize) -> f64 {
        self.distance_within(src, dst, f64::INFINITY)
            .unwrap_or(f64::INFINITY)
    }

    /// Distances from `src` to every vertex.
    pub fn distances_from(&mut self, src: usize) -> Vec<f64> {
        self.run(src, None, f64::INFINITY);
        self.dist.clone()
    }
}

/// Shortest edge path between two distinct vertices.
pub fn shortest_path(
    mesh: &TriangleMesh,
    adj: &AdjacencyIndex,
    src: usize,
    dst: usize,
) -> Result<GeodesicPath> {
    let n = mesh.n_vertices();
    for v in [src, dst] {
        if v >= n {
            return Err(SymmetryError::Index { index: v, len: n });
        }
    }
    if src == dst {
        return Err(SymmetryError::Config(format!(
            "path endpoints must differ (both {src})"
        )));
    }
    Dijkstra::new(mesh, adj).shortest_path(src, dst)
}

/// Values of eigenfunction column `col` along `path`.
pub fn restrict(basis: &SpectralBasis, path: &GeodesicPath, col: usize) -> Result<Vec<f64>> {
    if col >= basis.k() {
        return Err(SymmetryError::Index {
            index: col,
            len: basis.k(),
        });
    }
    Ok(path.vertices.iter().map(|&v| basis.phi[(v, col)]).collect())
}
