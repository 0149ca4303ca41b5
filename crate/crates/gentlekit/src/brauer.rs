//! Brauer graph algebras: C_B = Σ_α mult(α)·c_α·c_αᵗʳ over the columns of Inc(G),
//! and the tree / odd-1-cycle positivity criterion.

use std::collections::BTreeMap;

use serde_json::{json, Value};
use thiserror::Error;

use crate::exact_linalg::IntMatrix;
use crate::ribbon::{RibbonError, RibbonGraph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BrauerError {
    #[error(transparent)]
    Ribbon(#[from] RibbonError),
    #[error("invalid multiplicity: {0}")]
    Multiplicity(String),
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrauerGraph {
    pub graph: RibbonGraph,
    /// Indexed by vertex; all ≥ 1.
    pub multiplicity: Vec<u64>,
}

impl BrauerGraph {
    pub fn new(graph: RibbonGraph, multiplicity: Vec<u64>) -> Result<Self, BrauerError> {
        if multiplicity.len() != graph.num_vertices() {
            return Err(BrauerError::Multiplicity(format!(
                "expected {} entries",
                graph.num_vertices()
            )));
        }
        if multiplicity.contains(&0) {
            return Err(BrauerError::Multiplicity(
                "multiplicities must be positive".into(),
            ));
        }
        Ok(BrauerGraph {
            graph,
            multiplicity,
        })
    }

    pub fn trivial(graph: RibbonGraph) -> Self {
        let n = graph.num_vertices();
        BrauerGraph {
            graph,
            multiplicity: vec![1; n],
        }
    }

    /// Ribbon-graph JSON with an optional `multiplicity` object (vertex id → integer).
    pub fn from_json(v: &Value) -> Result<Self, BrauerError> {
        let graph = RibbonGraph::from_json(v, false)?;
        let mut mult = vec![1u64; graph.num_vertices()];
        if let Some(m) = v.get("multiplicity") {
            let obj = m.as_object().ok_or_else(|| {
                BrauerError::Multiplicity("`multiplicity` must be an object".into())
            })?;
            for (id, val) in obj {
                let k = graph
                    .vertex_index(id)
                    .ok_or_else(|| BrauerError::Multiplicity(format!("unknown vertex `{id}`")))?;
                mult[k] = val.as_u64().ok_or_else(|| {
                    BrauerError::Multiplicity(format!("vertex `{id}`: not a non-negative integer"))
                })?;
            }
        }
        BrauerGraph::new(graph, mult)
    }

    pub fn is_trivial_multiplicity(&self) -> bool {
        self.multiplicity.iter().all(|&m| m == 1)
    }
}

pub fn brauer_cartan(b: &BrauerGraph) -> IntMatrix {
    let inc = b.graph.incidence_plus();
    let n = b.graph.num_edges();
    let mut c = IntMatrix::zeros(n, n);
    for (v, &m) in b.multiplicity.iter().enumerate() {
        let col = inc.column(v);
        for i in 0..n {
            for j in 0..n {
                let add = &col[i] * &col[j] * m;
                if add != 0.into() {
                    c.set(i, j, c.get(i, j) + add);
                }
            }
        }
    }
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Tree,
    OddOneCycle,
    Other,
}

impl Structure {
    pub fn as_str(self) -> &'static str {
        match self {
            Structure::Tree => "tree",
            Structure::OddOneCycle => "odd-1-cycle",
            Structure::Other => "other",
        }
    }
}

/// Cycle rank |E| − |V| + 1 and bipartiteness decide the tag; a loop is an odd cycle.
pub fn structure(g: &RibbonGraph) -> Structure {
    let cycles = g.num_edges() as i64 - g.num_vertices() as i64 + 1;
    match cycles {
        0 => Structure::Tree,
        1 if !g.is_bipartite() => Structure::OddOneCycle,
        _ => Structure::Other,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrauerClassification {
    pub cartan: IntMatrix,
    pub corank: usize,
    pub positive_definite: bool,
    pub structure: Structure,
    /// Only for trivial multiplicities: "finite", "1-domestic" or "not finite, not 1-domestic".
    pub rep_type: Option<&'static str>,
}

impl BrauerClassification {
    pub fn to_json(&self) -> Value {
        json!({
            "cartan": self.cartan.to_json(),
            "corank": self.corank,
            "definiteness": if self.positive_definite { "positive-definite" } else { "semidefinite-singular" },
            "structure": self.structure.as_str(),
            "repType": self.rep_type,
        })
    }
}

pub fn brauer_classify(b: &BrauerGraph) -> Result<BrauerClassification, BrauerError> {
    let cartan = brauer_cartan(b);
    let (_, corank) = cartan.rank_corank();
    let positive_definite = corank == 0;
    let st = structure(&b.graph);
    if positive_definite != (st != Structure::Other) {
        return Err(BrauerError::InternalMismatch(format!(
            "corank {corank} but structure {}",
            st.as_str()
        )));
    }
    let rep_type = b.is_trivial_multiplicity().then_some(match st {
        Structure::Tree => "finite",
        Structure::OddOneCycle => "1-domestic",
        Structure::Other => "not finite, not 1-domestic",
    });
    Ok(BrauerClassification {
        cartan,
        corank,
        positive_definite,
        structure: st,
        rep_type,
    })
}

/// Multiplicities keyed by vertex id, for display.
pub fn multiplicity_map(b: &BrauerGraph) -> BTreeMap<String, u64> {
    b.graph
        .vertices()
        .iter()
        .zip(&b.multiplicity)
        .map(|(v, &m)| (v.id.clone(), m))
        .collect()
}
