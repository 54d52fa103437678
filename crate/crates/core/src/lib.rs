//! Intrinsic reflective symmetry detection on triangle meshes.
//!
//! The pipeline computes a Laplace-Beltrami eigenbasis, picks heat-kernel
//! feature points, pairs them by an exact matching, votes the parity of each
//! eigenfunction along geodesics between pairs, refines the resulting
//! diagonal functional map with a rotation on SO(k), and reads off a dense
//! vertex-to-vertex symmetry map by nearest neighbors in the spectral
//! embedding.
//!
//! ```no_run
//! use symmetria::{detect, RunConfig, synthetic};
//!
//! let shape = synthetic::mirrored_blob(24);
//! let det = detect(&shape.mesh, &RunConfig::default()).unwrap();
//! println!("vertex 0 maps to {}", det.sigma()[0]);
//! ```

pub mod adjacency;
pub mod config;
pub mod correction;
pub mod dense;
pub mod error;
pub mod evaluation;
pub mod export;
pub mod files;
pub mod functional_map;
pub mod geodesics;
pub mod kdtree;
pub mod mesh;
pub mod meshio;
pub mod pairing;
pub mod pipeline;
pub mod signatures;
pub mod spectral;
pub mod synthetic;

pub use adjacency::AdjacencyIndex;
pub use config::RunConfig;
pub use error::{Result, SymmetryError};
pub use mesh::TriangleMesh;
pub use pipeline::{detect, detect_from_basis, Detection};
pub use spectral::{eigendecompose, LaplaceOperator, SpectralBasis};
