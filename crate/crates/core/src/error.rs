use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = SymmetryError> = std::result::Result<T, E>;

/// Every failure the detection pipeline can report.
#[derive(Debug, Error)]
pub enum SymmetryError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid mesh ({element}): {message}")]
    Validation { element: String, message: String },

    #[error("non-manifold edge ({0}, {1}) has {2} incident faces")]
    NonManifold(usize, usize, usize),

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("eigensolver did not converge: {0}")]
    Convergence(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("degenerate spectrum: {0}")]
    DegenerateSpectrum(String),

    #[error("no HKS feature points found")]
    NoFeatures,

    #[error("infeasible assignment: {pairs} pairs requested from {features} features")]
    Infeasible { pairs: usize, features: usize },

    #[error("vertex {dst} unreachable from {src}")]
    Unreachable { src: usize, dst: usize },

    #[error("index {index} out of range (size {len})")]
    Index { index: usize, len: usize },

    #[error("degenerate functional map: {0}")]
    DegenerateMap(String),

    #[error("ground truth is empty")]
    EmptyGroundTruth,

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl SymmetryError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn validation(element: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Validation {
            element: element.into(),
            message: message.into(),
        }
    }

    /// Input problems map to exit code 1, numerical failures to 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Numerical(_)
            | Self::Convergence(_)
            | Self::DegenerateSpectrum(_)
            | Self::NoFeatures
            | Self::Infeasible { .. }
            | Self::DegenerateMap(_) => 2,
            _ => 1,
        }
    }
}
