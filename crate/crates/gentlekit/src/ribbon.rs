//! Marked ribbon graphs: vertices with linearly ordered half-edges, glued in
//! pairs by an involution. The three constructions live here:
//!
//! * [`RibbonGraph::from_gentle`] — the graph of permitted threads of a gentle quiver,
//! * [`RibbonGraph::to_quiver`] — its inverse, reading arrows off direct predecessors,
//! * [`ForbiddenRibbon::from_gentle`] — the dual graph on forbidden threads with
//!   its parity bidirection.
//!
//! Half-edges at a vertex are stored max → min, so position 0 is the marked
//! (maximal) half-edge. Each edge also carries a *reference orientation*
//! (target half, source half) used to read signed edge ids in walks.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde_json::{json, Value};
use thiserror::Error;

use crate::exact_linalg::IntMatrix;
use crate::quiver::{Arrow, BoundQuiver, GentleQuiver, QuiverError, Thread};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RibbonError {
    #[error("invalid ribbon graph JSON: {0}")]
    Json(String),
    #[error("half-edge `{0}` is listed more than once")]
    DuplicateHalfEdge(String),
    #[error("half-edge `{0}` is not paired by the involution exactly once")]
    BadInvolution(String),
    #[error("unknown half-edge `{0}`")]
    UnknownHalfEdge(String),
    #[error("graph is not connected")]
    Disconnected,
    #[error("no vertex has degree at least two")]
    NoVertexOfDegreeTwo,
    #[error("global dimension is infinite (full cycles present)")]
    InfiniteGlobalDimension,
    #[error(transparent)]
    Quiver(#[from] QuiverError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdge {
    pub name: String,
    pub vertex: usize,
    /// Position in the vertex's order; 0 is maximal.
    pub pos: usize,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub name: String,
    /// Reference orientation: target and source half-edges.
    pub target: usize,
    pub source: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonVertex {
    pub id: String,
    /// Half-edges, max → min.
    pub half_edges: Vec<usize>,
    /// Optional names for the arrows (h_{t-1}, h_t), t = 1..ℓ.
    pub arrow_names: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RibbonGraph {
    vertices: Vec<RibbonVertex>,
    half_edges: Vec<HalfEdge>,
    edges: Vec<Edge>,
}

/// Signs on half-edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bidirection(pub Vec<i8>);

impl Bidirection {
    pub fn constant(g: &RibbonGraph) -> Self {
        Bidirection(vec![1; g.num_half_edges()])
    }

    pub fn is_direction(&self, g: &RibbonGraph) -> bool {
        (0..g.num_half_edges()).all(|h| self.0[h] == -self.0[g.iota(h)])
    }
}

/// Input description of one vertex for [`RibbonGraph::from_parts`].
#[derive(Debug, Clone)]
pub struct VertexSpec {
    pub id: String,
    pub half_edges: Vec<String>,
    pub arrow_names: Option<Vec<String>>,
}

impl RibbonGraph {
    /// Builds a graph from named half-edges. `iota` lists each edge as
    /// `(target, source)` in its reference orientation. With `require_marked`,
    /// the marked-ribbon-graph axioms (connected, some vertex of degree ≥ 2) are enforced;
    /// without it only connectivity is.
    pub fn from_parts(
        vertices: Vec<VertexSpec>,
        iota: Vec<(String, String)>,
        edge_names: Option<Vec<String>>,
        require_marked: bool,
    ) -> Result<Self, RibbonError> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut half_edges = Vec::new();
        let mut rverts = Vec::new();
        for (vi, v) in vertices.into_iter().enumerate() {
            let mut hs = Vec::new();
            for (p, h) in v.half_edges.iter().enumerate() {
                if index.insert(h.clone(), half_edges.len()).is_some() {
                    return Err(RibbonError::DuplicateHalfEdge(h.clone()));
                }
                hs.push(half_edges.len());
                half_edges.push(HalfEdge {
                    name: h.clone(),
                    vertex: vi,
                    pos: p,
                    edge: usize::MAX,
                });
            }
            if let Some(names) = &v.arrow_names {
                if names.len() + 1 != hs.len().max(1) {
                    return Err(RibbonError::Json(format!(
                        "vertex `{}`: expected {} arrow names",
                        v.id,
                        hs.len().saturating_sub(1)
                    )));
                }
            }
            rverts.push(RibbonVertex {
                id: v.id,
                half_edges: hs,
                arrow_names: v.arrow_names,
            });
        }
        if let Some(names) = &edge_names {
            if names.len() != iota.len() {
                return Err(RibbonError::Json(
                    "`edges` must name every pair in `iota`".into(),
                ));
            }
        }
        let mut edges = Vec::new();
        for (k, (t, s)) in iota.iter().enumerate() {
            let ti = *index
                .get(t)
                .ok_or_else(|| RibbonError::UnknownHalfEdge(t.clone()))?;
            let si = *index
                .get(s)
                .ok_or_else(|| RibbonError::UnknownHalfEdge(s.clone()))?;
            for h in [ti, si] {
                if half_edges[h].edge != usize::MAX || ti == si {
                    return Err(RibbonError::BadInvolution(half_edges[h].name.clone()));
                }
                half_edges[h].edge = k;
            }
            let name = edge_names
                .as_ref()
                .map(|n| n[k].clone())
                .unwrap_or_else(|| (k + 1).to_string());
            edges.push(Edge {
                name,
                target: ti,
                source: si,
            });
        }
        if let Some(h) = half_edges.iter().find(|h| h.edge == usize::MAX) {
            return Err(RibbonError::BadInvolution(h.name.clone()));
        }
        let g = RibbonGraph {
            vertices: rverts,
            half_edges,
            edges,
        };
        if g.vertices.is_empty()
            || g.vertices.iter().any(|v| v.half_edges.is_empty())
            || !g.is_connected()
        {
            return Err(RibbonError::Disconnected);
        }
        if require_marked && g.vertices.iter().all(|v| v.half_edges.len() < 2) {
            return Err(RibbonError::NoVertexOfDegreeTwo);
        }
        Ok(g)
    }

    pub fn vertices(&self) -> &[RibbonVertex] {
        &self.vertices
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_half_edges(&self) -> usize {
        self.half_edges.len()
    }

    pub fn iota(&self, h: usize) -> usize {
        let e = &self.edges[self.half_edges[h].edge];
        if e.target == h {
            e.source
        } else {
            e.target
        }
    }

    pub fn vertex_of(&self, h: usize) -> usize {
        self.half_edges[h].vertex
    }

    pub fn pos(&self, h: usize) -> usize {
        self.half_edges[h].pos
    }

    pub fn degree(&self, v: usize) -> usize {
        self.vertices[v].half_edges.len()
    }

    /// ℓ^α = degree − 1.
    pub fn ell(&self, v: usize) -> usize {
        self.degree(v) - 1
    }

    pub fn top(&self, v: usize) -> usize {
        self.vertices[v].half_edges[0]
    }

    pub fn bottom(&self, v: usize) -> usize {
        *self.vertices[v].half_edges.last().unwrap()
    }

    /// Half-edge at position `p` of vertex `v`.
    pub fn at(&self, v: usize, p: usize) -> Option<usize> {
        self.vertices[v].half_edges.get(p).copied()
    }

    pub fn edge_index(&self, name: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.name == name)
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let ed = &self.edges[e];
        self.vertex_of(ed.target) == self.vertex_of(ed.source)
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &h in &self.vertices[v].half_edges {
                let w = self.vertex_of(self.iota(h));
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Swaps the reference orientation of edge `e`.
    pub fn reorient(&mut self, e: usize) {
        let ed = &mut self.edges[e];
        std::mem::swap(&mut ed.target, &mut ed.source);
    }

    /// Sets the reference orientation so that `target` is the target half-edge of its edge.
    pub fn orient_towards(&mut self, target: usize) {
        let e = self.half_edges[target].edge;
        if self.edges[e].target != target {
            self.reorient(e);
        }
    }

    /// Isomorphism key: the sorted per-vertex sequences of edge names (max → min).
    /// Together with edge names this pins down the involution and the orders.
    pub fn canonical_form(&self) -> Vec<Vec<String>> {
        let mut seqs: Vec<Vec<String>> = self
            .vertices
            .iter()
            .map(|v| {
                v.half_edges
                    .iter()
                    .map(|&h| self.edges[self.half_edges[h].edge].name.clone())
                    .collect()
            })
            .collect();
        seqs.sort();
        seqs
    }

    /// Incidence matrix (|E| × |V|): row i is σ(h)e_{z(h)} + σ(h')e_{z(h')}.
    pub fn incidence_matrix(&self, sigma: &Bidirection) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.num_edges(), self.num_vertices());
        for (i, e) in self.edges.iter().enumerate() {
            for h in [e.target, e.source] {
                m.add_at(i, self.vertex_of(h), sigma.0[h] as i64);
            }
        }
        m
    }

    pub fn incidence_plus(&self) -> IntMatrix {
        self.incidence_matrix(&Bidirection::constant(self))
    }

    /// 2-colouring by BFS.
    pub fn is_bipartite(&self) -> bool {
        self.is_balanced(&Bidirection::constant(self))
    }

    /// A bidirected graph is balanced if there is a ±1 potential x with
    /// σ(h)x_{z(h)} + σ(h')x_{z(h')} = 0 on every edge.
    pub fn is_balanced(&self, sigma: &Bidirection) -> bool {
        let n = self.num_vertices();
        let mut x: Vec<i8> = vec![0; n];
        x[0] = 1;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for &h in &self.vertices[v].half_edges {
                let h2 = self.iota(h);
                let w = self.vertex_of(h2);
                // σ(h)x_v + σ(h2)x_w = 0  ⇒  x_w = -σ(h)σ(h2)x_v
                let want = -sigma.0[h] * sigma.0[h2] * x[v];
                if x[w] == 0 {
                    x[w] = want;
                    stack.push(w);
                } else if x[w] != want {
                    return false;
                }
            }
        }
        true
    }

    /// △: the marked ribbon graph of permitted threads. Edges are named by quiver
    /// vertices; the reference orientation takes the smaller (thread, position)
    /// slot as source.
    pub fn from_gentle(q: &GentleQuiver) -> RibbonGraph {
        thread_graph(q, q.permitted(), &q.permitted_slots(), true)
    }

    /// ▽: the bound quiver of the graph, arrows named by the stored labels or
    /// `<vertex><t>`.
    pub fn to_bound_quiver(&self) -> Result<BoundQuiver, QuiverError> {
        let vertices: Vec<String> = self.edges.iter().map(|e| e.name.clone()).collect();
        let mut arrows = Vec::new();
        let mut arrow_at: HashMap<usize, usize> = HashMap::new(); // source half h_t -> arrow
        for v in &self.vertices {
            for t in 1..v.half_edges.len() {
                let (hp, h) = (v.half_edges[t - 1], v.half_edges[t]);
                let name = arrow_label(v, t);
                arrow_at.insert(h, arrows.len());
                arrows.push(Arrow {
                    name,
                    source: self.half_edges[h].edge,
                    target: self.half_edges[hp].edge,
                });
            }
        }
        let mut rels = Vec::new();
        for v in &self.vertices {
            for t in 1..v.half_edges.len() {
                let a1 = arrow_at[&v.half_edges[t]];
                // a1 = (h'1, h1); relation a2·a1 when a2 = (h'2, h2) with h2 = ι h'1
                let h2 = self.iota(v.half_edges[t - 1]);
                if let Some(&a2) = arrow_at.get(&h2) {
                    rels.push((a2, a1));
                }
            }
        }
        BoundQuiver::new(vertices, arrows, rels)
    }

    /// Name of the ▽-arrow (h_{t−1}, h_t) at vertex `v`, t ≥ 1.
    pub fn arrow_name(&self, v: usize, t: usize) -> String {
        arrow_label(&self.vertices[v], t)
    }

    pub fn to_quiver(&self) -> Result<GentleQuiver, QuiverError> {
        GentleQuiver::new(self.to_bound_quiver()?)
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self
            .vertices
            .iter()
            .map(|v| {
                let mut o = serde_json::Map::new();
                o.insert("id".into(), json!(v.id));
                o.insert(
                    "halfEdges".into(),
                    json!(v
                        .half_edges
                        .iter()
                        .map(|&h| self.half_edges[h].name.clone())
                        .collect::<Vec<_>>()),
                );
                if let Some(a) = &v.arrow_names {
                    o.insert("arrows".into(), json!(a));
                }
                Value::Object(o)
            })
            .collect();
        let iota: Vec<Value> = self
            .edges
            .iter()
            .map(|e| {
                json!([
                    self.half_edges[e.target].name,
                    self.half_edges[e.source].name
                ])
            })
            .collect();
        let edges: Vec<&str> = self.edges.iter().map(|e| e.name.as_str()).collect();
        json!({ "vertices": vertices, "iota": iota, "edges": edges })
    }

    pub fn from_json(v: &Value, require_marked: bool) -> Result<Self, RibbonError> {
        let err = |m: &str| RibbonError::Json(m.to_string());
        let verts = v
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing `vertices` array"))?;
        let mut specs = Vec::new();
        for (k, x) in verts.iter().enumerate() {
            let id = match x.get("id") {
                Some(Value::String(s)) => s.clone(),
                Some(Value::Number(n)) => n.to_string(),
                None => (k + 1).to_string(),
                _ => return Err(err("vertex `id` must be a string or number")),
            };
            let hs = x
                .get("halfEdges")
                .and_then(Value::as_array)
                .ok_or_else(|| err("vertex without `halfEdges`"))?
                .iter()
                .map(json_name)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| err("half-edge ids must be strings or numbers"))?;
            let arrow_names = match x.get("arrows") {
                None => None,
                Some(a) => Some(
                    a.as_array()
                        .ok_or_else(|| err("`arrows` must be an array"))?
                        .iter()
                        .map(json_name)
                        .collect::<Option<Vec<_>>>()
                        .ok_or_else(|| err("arrow names must be strings"))?,
                ),
            };
            specs.push(VertexSpec {
                id,
                half_edges: hs,
                arrow_names,
            });
        }
        let mut iota = Vec::new();
        for p in v
            .get("iota")
            .and_then(Value::as_array)
            .ok_or_else(|| err("missing `iota` array"))?
        {
            match p.as_array().map(|a| a.as_slice()) {
                Some([a, b]) => iota.push((
                    json_name(a).ok_or_else(|| err("bad `iota` entry"))?,
                    json_name(b).ok_or_else(|| err("bad `iota` entry"))?,
                )),
                _ => return Err(err("`iota` entries must be pairs")),
            }
        }
        let edge_names = match v.get("edges") {
            None => None,
            Some(e) => Some(
                e.as_array()
                    .ok_or_else(|| err("`edges` must be an array"))?
                    .iter()
                    .map(json_name)
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| err("edge names must be strings or numbers"))?,
            ),
        };
        RibbonGraph::from_parts(specs, iota, edge_names, require_marked)
    }

    /// Graphviz rendering; half-edge positions label the edge ends.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for (k, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{} [label=\"{}\"];", k, v.id.replace('"', "\\\""));
        }
        for e in &self.edges {
            let (t, so) = (&self.half_edges[e.target], &self.half_edges[e.source]);
            let _ = writeln!(
                s,
                "  v{} -- v{} [label=\"{}\", headlabel=\"{}\", taillabel=\"{}\"];",
                so.vertex, t.vertex, e.name, t.pos, so.pos
            );
        }
        s.push_str("}\n");
        s
    }
}

fn json_name(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn arrow_label(v: &RibbonVertex, t: usize) -> String {
    match &v.arrow_names {
        Some(names) => names[t - 1].clone(),
        None => default_arrow_name(&v.id, t),
    }
}

fn default_arrow_name(vertex: &str, t: usize) -> String {
    if vertex.chars().last().is_some_and(|c| c.is_alphabetic())
        && vertex.chars().all(|c| c.is_alphanumeric() || c == '_')
    {
        format!("{vertex}{t}")
    } else {
        let clean: String = vertex
            .chars()
            .map(|c| if c.is_alphanumeric() { c } else { '_' })
            .collect();
        format!("{clean}_{t}")
    }
}

/// Shared construction for △ and ▲.
fn thread_graph(
    q: &GentleQuiver,
    threads: &[Thread],
    slots: &[[(usize, usize); 2]],
    label_arrows: bool,
) -> RibbonGraph {
    let qv = q.base().vertices();
    let mut specs = Vec::new();
    for th in threads {
        let arrow_names = label_arrows.then(|| {
            th.arrows
                .iter()
                .map(|&a| q.base().arrows()[a].name.clone())
                .collect()
        });
        specs.push(VertexSpec {
            id: th.name.clone(),
            half_edges: (0..th.centers.len())
                .map(|p| format!("{}#{}", th.name, p))
                .collect(),
            arrow_names,
        });
    }
    let iota = slots
        .iter()
        .map(|[lo, hi]| {
            (
                format!("{}#{}", threads[hi.0].name, hi.1),
                format!("{}#{}", threads[lo.0].name, lo.1),
            )
        })
        .collect();
    RibbonGraph::from_parts(specs, iota, Some(qv.to_vec()), false)
        .expect("thread graph is well formed")
}

/// ▲: the forbidden marked ribbon graph with σ̂(ĥ_t) = (−1)^{ℓ−t}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenRibbon {
    pub graph: RibbonGraph,
    pub sigma: Bidirection,
}

impl ForbiddenRibbon {
    pub fn from_gentle(q: &GentleQuiver) -> Result<Self, RibbonError> {
        let slots = q
            .forbidden_slots()
            .ok_or(RibbonError::InfiniteGlobalDimension)?;
        let graph = thread_graph(q, q.forbidden(), &slots, false);
        let sigma = graph
            .half_edges()
            .iter()
            .map(|h| {
                let ell = graph.ell(h.vertex);
                if (ell - h.pos).is_multiple_of(2) {
                    1
                } else {
                    -1
                }
            })
            .collect();
        Ok(ForbiddenRibbon {
            graph,
            sigma: Bidirection(sigma),
        })
    }

    pub fn incidence_matrix(&self) -> IntMatrix {
        self.graph.incidence_matrix(&self.sigma)
    }

    pub fn is_balanced(&self) -> bool {
        self.graph.is_balanced(&self.sigma)
    }
}

/// Edge-name → vertex-id table of the reference orientation, for display.
pub fn orientation_table(g: &RibbonGraph) -> BTreeMap<usize, (String, usize, String, usize)> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let s = &g.half_edges()[e.source];
            let t = &g.half_edges()[e.target];
            (
                k,
                (
                    g.vertices()[s.vertex].id.clone(),
                    s.pos,
                    g.vertices()[t.vertex].id.clone(),
                    t.pos,
                ),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop_graph() -> RibbonGraph {
        RibbonGraph::from_parts(
            vec![VertexSpec {
                id: "a".into(),
                half_edges: vec!["h0".into(), "h1".into()],
                arrow_names: None,
            }],
            vec![("h1".into(), "h0".into())],
            None,
            true,
        )
        .unwrap()
    }

    #[test]
    fn loop_graph_basics() {
        let g = loop_graph();
        assert_eq!(g.incidence_plus(), IntMatrix::from_rows(&[[2]]));
        assert!(!g.is_bipartite());
        let q = g.to_quiver().unwrap();
        assert_eq!(q.render(), "vertices 1;\narrow a1: 1 -> 1;\nrel a1.a1;\n");
        let back = RibbonGraph::from_gentle(&q);
        assert_eq!(back.canonical_form(), g.canonical_form());
        // a direction on a loop gives a zero row
        assert_eq!(
            g.incidence_matrix(&Bidirection(vec![1, -1])),
            IntMatrix::from_rows(&[[0]])
        );
    }

    #[test]
    fn single_edge_rejected() {
        let r = RibbonGraph::from_parts(
            vec![
                VertexSpec {
                    id: "a".into(),
                    half_edges: vec!["x".into()],
                    arrow_names: None,
                },
                VertexSpec {
                    id: "b".into(),
                    half_edges: vec!["y".into()],
                    arrow_names: None,
                },
            ],
            vec![("x".into(), "y".into())],
            None,
            true,
        );
        assert_eq!(r, Err(RibbonError::NoVertexOfDegreeTwo));
    }

    #[test]
    fn small_row_two() {
        // α has centres 2 1 2, β is the trivial thread at 1
        let q = GentleQuiver::parse("vertices 1 2; arrow a1: 1 -> 2; arrow a2: 2 -> 1; rel a2.a1;")
            .unwrap();
        let g = RibbonGraph::from_gentle(&q);
        assert_eq!(
            g.canonical_form(),
            vec![
                vec!["1".to_string()],
                vec!["2".into(), "1".into(), "2".into()]
            ]
        );
        assert_eq!(g.incidence_plus(), IntMatrix::from_rows(&[[1, 1], [2, 0]]));
        assert!(!g.is_bipartite());
    }
}
