//! File formats, overlay rendering and bundled fixtures.

pub mod diagram;
pub mod fixtures;
pub mod overlay;
pub mod solution;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use diagram::{read_diagram, Diagram, DiagramFile, Record};
pub use fixtures::{fixture, FIXTURES};
pub use overlay::{emit_overlay, overlay_svg};
pub use solution::{write_solutions, SolutionFile, SolutionRecord, Timing};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[source] serde_json::Error),
    #[error("unsupported diagram version {0}")]
    Version(u32),
    #[error("primitive {index}: {message}")]
    Record { index: usize, message: String },
    #[error("diagram has no primitives")]
    EmptyDiagram,
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
}

impl IoError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
