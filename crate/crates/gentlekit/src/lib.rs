//! Gentle algebras through their marked ribbon graphs.
//!
//! A gentle bound quiver `(Q, I)` is encoded by a marked ribbon graph `G`
//! (vertices = permitted threads, edges = vertices of `Q`). Most derived
//! invariants of the algebra `kQ/I` can be read off `G`: the Cartan matrix
//! identity `C + Cᵗʳ = Inc(G)·Inc(G)ᵗʳ`, the Euler form's corank and Dynkin
//! type, the AAG invariant via faces, the Coxeter polynomial, and string/band
//! complexes via walks.
//!
//! ```
//! use gentlekit::{GentleQuiver, invariants};
//!
//! let q = GentleQuiver::parse("vertices 1; arrow a: 1 -> 1; rel a.a;").unwrap();
//! let cox = invariants::coxeter(&q).unwrap();
//! assert_eq!(cox.poly.to_string(), "z + 1");
//! ```

pub mod brauer;
pub mod derived;
pub mod exact_linalg;
pub mod invariants;
pub mod quiver;
pub mod random;
pub mod ribbon;
pub mod walks;

use std::path::Path;

use thiserror::Error;

pub use exact_linalg::{IntMatrix, IntPolynomial, LinalgError};
pub use quiver::{
    parse_quiver, Arrow, BoundQuiver, GentleQuiver, QuiverError, StringFunctionPair, Thread,
};
pub use ribbon::{Bidirection, ForbiddenRibbon, RibbonError, RibbonGraph};
pub use walks::{OrderedEdge, Walk, WalkClass, WalkError};

/// Errors from loading an instance from disk.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Quiver(#[from] QuiverError),
    #[error("{0}")]
    Ribbon(#[from] RibbonError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unrecognised file extension for {0} (expected .quiver or .rgraph.json)")]
    Extension(String),
}

/// A gentle quiver together with the marked ribbon graph used for walks.
///
/// From a `.quiver` file the graph is △(Q, I); from a `.rgraph.json` file the
/// quiver is ▽(G) and the graph keeps the file's names and reference orientation.
#[derive(Debug, Clone)]
pub struct GentleInstance {
    pub quiver: GentleQuiver,
    pub graph: RibbonGraph,
}

impl GentleInstance {
    pub fn from_quiver(quiver: GentleQuiver) -> Self {
        let graph = RibbonGraph::from_gentle(&quiver);
        GentleInstance { quiver, graph }
    }

    pub fn from_quiver_text(text: &str) -> Result<Self, QuiverError> {
        Ok(Self::from_quiver(GentleQuiver::parse(text)?))
    }

    pub fn from_graph(graph: RibbonGraph) -> Result<Self, QuiverError> {
        let quiver = graph.to_quiver()?;
        Ok(GentleInstance { quiver, graph })
    }

    pub fn from_ribbon_json(text: &str) -> Result<Self, LoadError> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let graph = RibbonGraph::from_json(&v, true)?;
        Ok(Self::from_graph(graph)?)
    }

    /// Loads by extension: `.quiver` or `.rgraph.json`.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, LoadError> {
        let path = path.as_ref();
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: shown.clone(),
            source,
        })?;
        if shown.ends_with(".quiver") {
            Ok(Self::from_quiver_text(&text)?)
        } else if shown.ends_with(".rgraph.json") {
            Self::from_ribbon_json(&text)
        } else {
            Err(LoadError::Extension(shown))
        }
    }
}
