//! Walks in a marked ribbon graph.
//!
//! An ordered edge is an edge together with a direction; relative to the
//! reference orientation it is either `i` or its inverse `-i`. A walk
//! `i1 i2 … in` is read like a path: its target is at `i1`, its source at `in`,
//! and consecutive ordered edges `i j` are concatenable when the source
//! half-edge of `i` and the target half-edge of `j` sit at the same vertex.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::ribbon::RibbonGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("edges at positions {0} and {next} are not concatenable", next = .0 + 1)]
    NotConcatenable(usize),
    #[error("walk is not reduced")]
    NotReduced,
    #[error("walk is trivial")]
    TrivialInput,
    #[error("empty walk")]
    Empty,
    #[error("endpoints do not match for concatenation")]
    EndpointMismatch,
}

/// An edge traversed along (`inv == false`) or against its reference orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OrderedEdge {
    pub edge: usize,
    pub inv: bool,
}

impl OrderedEdge {
    pub fn new(edge: usize, inv: bool) -> Self {
        OrderedEdge { edge, inv }
    }

    pub fn inverse(self) -> Self {
        OrderedEdge {
            edge: self.edge,
            inv: !self.inv,
        }
    }

    /// Target half-edge t^h.
    pub fn th(self, g: &RibbonGraph) -> usize {
        let e = &g.edges()[self.edge];
        if self.inv {
            e.source
        } else {
            e.target
        }
    }

    /// Source half-edge s^h.
    pub fn sh(self, g: &RibbonGraph) -> usize {
        let e = &g.edges()[self.edge];
        if self.inv {
            e.target
        } else {
            e.source
        }
    }

    /// The ordered edge whose target half-edge is `h`.
    pub fn with_target(g: &RibbonGraph, h: usize) -> Self {
        let e = g.half_edges()[h].edge;
        OrderedEdge {
            edge: e,
            inv: g.edges()[e].target != h,
        }
    }

    pub fn name(self, g: &RibbonGraph) -> String {
        let n = &g.edges()[self.edge].name;
        if self.inv {
            format!("-{n}")
        } else {
            n.clone()
        }
    }

    fn key(self) -> (usize, bool) {
        (self.edge, self.inv)
    }
}

impl PartialOrd for OrderedEdge {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrderedEdge {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

pub fn concatenable(g: &RibbonGraph, i: OrderedEdge, j: OrderedEdge) -> bool {
    g.vertex_of(i.sh(g)) == g.vertex_of(j.th(g))
}

/// deg(ij) for a concatenable pair: +1 if s^h(i) > t^h(j), −1 if smaller,
/// `None` when j = i⁻¹.
pub fn pair_degree(g: &RibbonGraph, i: OrderedEdge, j: OrderedEdge) -> Option<i64> {
    let (a, b) = (g.pos(i.sh(g)), g.pos(j.th(g)));
    match a.cmp(&b) {
        Ordering::Less => Some(1),
        Ordering::Greater => Some(-1),
        Ordering::Equal => None,
    }
}

/// Pair degree with the face convention deg(i i⁻¹) = −1.
pub fn closed_pair_degree(g: &RibbonGraph, i: OrderedEdge, j: OrderedEdge) -> i64 {
    pair_degree(g, i, j).unwrap_or(-1)
}

/// A walk; trivial walks carry only their vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    edges: Vec<OrderedEdge>,
    base: usize,
}

impl Walk {
    pub fn trivial(v: usize) -> Self {
        Walk {
            edges: Vec::new(),
            base: v,
        }
    }

    /// Validates concatenability at every step.
    pub fn new(g: &RibbonGraph, edges: Vec<OrderedEdge>) -> Result<Self, WalkError> {
        let first = *edges.first().ok_or(WalkError::Empty)?;
        for t in 1..edges.len() {
            if !concatenable(g, edges[t - 1], edges[t]) {
                return Err(WalkError::NotConcatenable(t));
            }
        }
        Ok(Walk {
            base: g.vertex_of(first.th(g)),
            edges,
        })
    }

    /// Parses whitespace-separated signed edge names such as `2 -3 -5 4`.
    pub fn parse(text: &str, g: &RibbonGraph) -> Result<Self, WalkError> {
        let mut edges = Vec::new();
        for tok in text.split_whitespace() {
            let (inv, name) = match tok.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, tok.strip_prefix('+').unwrap_or(tok)),
            };
            let e = g
                .edge_index(name)
                .ok_or_else(|| WalkError::UnknownEdge(tok.to_string()))?;
            edges.push(OrderedEdge::new(e, inv));
        }
        Walk::new(g, edges)
    }

    pub fn edges(&self) -> &[OrderedEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn target(&self, g: &RibbonGraph) -> usize {
        match self.edges.first() {
            Some(i) => g.vertex_of(i.th(g)),
            None => self.base,
        }
    }

    pub fn source(&self, g: &RibbonGraph) -> usize {
        match self.edges.last() {
            Some(i) => g.vertex_of(i.sh(g)),
            None => self.base,
        }
    }

    pub fn is_closed(&self, g: &RibbonGraph) -> bool {
        !self.is_trivial() && self.target(g) == self.source(g)
    }

    pub fn is_reduced(&self) -> bool {
        self.edges.windows(2).all(|w| w[1] != w[0].inverse())
    }

    pub fn inverse(&self) -> Walk {
        Walk {
            edges: self.edges.iter().rev().map(|e| e.inverse()).collect(),
            base: self.base,
        }
    }

    /// First `t` edges.
    pub fn prefix(&self, t: usize) -> Walk {
        Walk {
            edges: self.edges[..t].to_vec(),
            base: self.base,
        }
    }

    /// Plain concatenation (no cancellation); errors if the junction is not concatenable.
    pub fn concat(&self, g: &RibbonGraph, other: &Walk) -> Result<Walk, WalkError> {
        if self.source(g) != other.target(g) {
            return Err(WalkError::EndpointMismatch);
        }
        if self.is_trivial() {
            return Ok(other.clone());
        }
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        if other.is_trivial() {
            return Ok(Walk {
                edges,
                base: self.base,
            });
        }
        Walk::new(g, edges)
    }

    /// w^k.
    pub fn power(&self, g: &RibbonGraph, k: usize) -> Result<Walk, WalkError> {
        let mut out = Walk::trivial(self.target(g));
        for _ in 0..k {
            out = out.concat(g, self)?;
        }
        Ok(out)
    }

    /// Sum of pair degrees; defined for reduced walks.
    pub fn degree(&self, g: &RibbonGraph) -> Result<i64, WalkError> {
        let mut d = 0;
        for w in self.edges.windows(2) {
            d += pair_degree(g, w[0], w[1]).ok_or(WalkError::NotReduced)?;
        }
        Ok(d)
    }

    /// Degrees of the prefixes w_[1], …, w_[n].
    pub fn prefix_degrees(&self, g: &RibbonGraph) -> Result<Vec<i64>, WalkError> {
        let mut out = Vec::with_capacity(self.len());
        let mut d = 0;
        for t in 0..self.len() {
            if t > 0 {
                d += pair_degree(g, self.edges[t - 1], self.edges[t])
                    .ok_or(WalkError::NotReduced)?;
            }
            out.push(d);
        }
        Ok(out)
    }

    /// inc(w) = Σ_t (−1)^t e_{i_{t+1}}.
    pub fn incidence_vector(&self, g: &RibbonGraph) -> Vec<i64> {
        let mut v = vec![0; g.num_edges()];
        for (t, e) in self.edges.iter().enumerate() {
            v[e.edge] += if t % 2 == 0 { 1 } else { -1 };
        }
        v
    }

    /// Smallest p dividing the length with w = (w_[p])^{n/p}; the walk is
    /// primitive when this is the full length.
    pub fn period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|k| self.edges[k] == self.edges[k - p]))
            .unwrap_or(0)
    }

    pub fn is_primitive(&self) -> bool {
        !self.is_trivial() && self.period() == self.len()
    }

    pub fn display<'a>(&'a self, g: &'a RibbonGraph) -> WalkDisplay<'a> {
        WalkDisplay { w: self, g }
    }

    pub fn to_text(&self, g: &RibbonGraph) -> String {
        self.display(g).to_string()
    }
}

pub struct WalkDisplay<'a> {
    w: &'a Walk,
    g: &'a RibbonGraph,
}

impl fmt::Display for WalkDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.w.is_trivial() {
            return write!(f, "e({})", self.g.vertices()[self.w.base].id);
        }
        let parts: Vec<String> = self.w.edges.iter().map(|e| e.name(self.g)).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WalkClass {
    Open,
    ClosedEven,
    ClosedOdd,
    Belt,
    NotReduced,
}

impl WalkClass {
    pub fn as_str(self) -> &'static str {
        match self {
            WalkClass::Open => "open",
            WalkClass::ClosedEven => "closed-even",
            WalkClass::ClosedOdd => "closed-odd",
            WalkClass::Belt => "belt",
            WalkClass::NotReduced => "not-reduced",
        }
    }
}

/// A belt is `i1 … iL i1` with `i1 … iL` primitive, deg(w) = 0 and deg(iL i1 i2) = 0.
pub fn is_belt(g: &RibbonGraph, w: &Walk) -> bool {
    let n = w.len();
    if n < 2 || !w.is_reduced() || w.edges[0] != w.edges[n - 1] {
        return false;
    }
    let core = w.prefix(n - 1);
    if !core.is_primitive() {
        return false;
    }
    let (l, i1) = (w.edges[n - 2], w.edges[0]);
    let closing = pair_degree(g, l, i1)
        .zip(pair_degree(g, i1, w.edges[1]))
        .map(|(a, b)| a + b);
    w.degree(g) == Ok(0) && closing == Some(0)
}

pub fn classify_walk(g: &RibbonGraph, w: &Walk) -> WalkClass {
    if !w.is_reduced() {
        return WalkClass::NotReduced;
    }
    if is_belt(g, w) {
        return WalkClass::Belt;
    }
    if !w.is_closed(g) {
        WalkClass::Open
    } else if w.len().is_multiple_of(2) {
        WalkClass::ClosedEven
    } else {
        WalkClass::ClosedOdd
    }
}

/// One step of the face permutation: the next ordered edge after `i`, and
/// whether the step descends (true) or wraps around to the top (false).
pub fn face_successor(g: &RibbonGraph, i: OrderedEdge) -> (OrderedEdge, bool) {
    let h = i.sh(g);
    let v = g.vertex_of(h);
    match g.at(v, g.pos(h) + 1) {
        Some(next) => (OrderedEdge::with_target(g, next), true),
        None => (OrderedEdge::with_target(g, g.top(v)), false),
    }
}

/// OT(α) for every vertex α: the maximal descending walk starting at the top half-edge.
pub fn anti_walks(g: &RibbonGraph) -> Vec<Walk> {
    (0..g.num_vertices())
        .map(|v| {
            let mut cur = OrderedEdge::with_target(g, g.top(v));
            let mut edges = vec![cur];
            loop {
                let (nx, desc) = face_successor(g, cur);
                if !desc {
                    break;
                }
                edges.push(nx);
                cur = nx;
            }
            Walk { edges, base: v }
        })
        .collect()
}

/// ξ(α) = s(OT(α)).
pub fn xi(g: &RibbonGraph) -> Vec<usize> {
    anti_walks(g).iter().map(|w| w.source(g)).collect()
}

/// TO(α) = OT(α)⁻¹.
pub fn co_anti_walk(g: &RibbonGraph, v: usize) -> Walk {
    anti_walks(g)[v].inverse()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    /// Closed walk, rotated so that its smallest ordered edge comes first.
    pub walk: Walk,
    pub is_full: bool,
    pub closed_degree: i64,
    /// Vertices α whose anti-walks OT(α) make up the face, in order; empty for full faces.
    pub anti_walk_factors: Vec<usize>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    /// ((ℓ − deg°)/2, (ℓ + deg°)/2).
    pub fn aag_pair(&self) -> (i64, i64) {
        let l = self.len() as i64;
        ((l - self.closed_degree) / 2, (l + self.closed_degree) / 2)
    }
}

/// Orbits of the face permutation on ordered edges.
pub fn faces(g: &RibbonGraph) -> Vec<Face> {
    let m = g.num_edges();
    let idx = |e: OrderedEdge| 2 * e.edge + e.inv as usize;
    let mut seen = vec![false; 2 * m];
    let mut out = Vec::new();
    for k in 0..2 * m {
        if seen[k] {
            continue;
        }
        let start = OrderedEdge::new(k / 2, k % 2 == 1);
        let mut edges = Vec::new();
        let mut cur = start;
        loop {
            seen[idx(cur)] = true;
            edges.push(cur);
            let (nx, _) = face_successor(g, cur);
            if nx == start {
                break;
            }
            cur = nx;
        }
        let r = (0..edges.len()).min_by_key(|&i| edges[i]).unwrap();
        edges.rotate_left(r);
        let n = edges.len();
        let mut deg = 0;
        let mut factors = Vec::new();
        for t in 0..n {
            let (i, j) = (edges[t], edges[(t + 1) % n]);
            let (_, desc) = face_successor(g, i);
            deg += if desc { 1 } else { -1 };
            debug_assert_eq!(closed_pair_degree(g, i, j), if desc { 1 } else { -1 });
        }
        let is_full = edges.iter().all(|&e| face_successor(g, e).1);
        if !is_full {
            // anti-walks begin exactly where the face arrives at a top half-edge
            for e in &edges {
                let h = e.th(g);
                if g.pos(h) == 0 {
                    factors.push(g.vertex_of(h));
                }
            }
        }
        let base = g.vertex_of(edges[0].th(g));
        out.push(Face {
            walk: Walk { edges, base },
            is_full,
            closed_degree: deg,
            anti_walk_factors: factors,
        });
    }
    out.sort_by(|a, b| a.walk.edges.cmp(&b.walk.edges));
    out
}

/// Reduced concatenation w1·w2 (requires s(w1) = t(w2)).
pub fn reduced_concat(g: &RibbonGraph, w1: &Walk, w2: &Walk) -> Result<Walk, WalkError> {
    if w1.source(g) != w2.target(g) {
        return Err(WalkError::EndpointMismatch);
    }
    let mut a = w1.edges.clone();
    let mut k = 0;
    while let (Some(&x), Some(&y)) = (a.last(), w2.edges.get(k)) {
        if y != x.inverse() {
            break;
        }
        a.pop();
        k += 1;
    }
    a.extend_from_slice(&w2.edges[k..]);
    if a.is_empty() {
        return Ok(Walk::trivial(w1.target(g)));
    }
    Walk::new(g, a)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlusOps {
    pub left: Walk,
    pub right: Walk,
    pub both: Walk,
    pub m_shift: i64,
}

/// ₊w = TO(t(w))·w, w₊ = w·OT(s(w)), ₊w₊, and m(w) = ℓ(TO(t(w))) − 2.
pub fn plus_ops(g: &RibbonGraph, w: &Walk) -> Result<PlusOps, WalkError> {
    if w.is_trivial() {
        return Err(WalkError::TrivialInput);
    }
    if !w.is_reduced() {
        return Err(WalkError::NotReduced);
    }
    let ot = anti_walks(g);
    let beta = w.target(g);
    let alpha = w.source(g);
    let to_beta = ot[beta].inverse();
    let left = reduced_concat(g, &to_beta, w)?;
    let right = reduced_concat(g, w, &ot[alpha])?;
    let both = reduced_concat(g, &left, &ot[alpha])?;
    Ok(PlusOps {
        left,
        right,
        both,
        m_shift: to_beta.len() as i64 - 2,
    })
}

/// Canonical representative of the pair (m, w) under (m, w) ~ (m + deg w, w⁻¹).
pub fn canonical_pair(g: &RibbonGraph, m: i64, w: &Walk) -> Result<(i64, Walk), WalkError> {
    let inv = w.inverse();
    if inv.edges < w.edges {
        Ok((m + w.degree(g)?, inv))
    } else {
        Ok((m, w.clone()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Resolvability {
    pub left: bool,
    pub right: bool,
    pub left_primitive: bool,
    pub right_primitive: bool,
}

impl Resolvability {
    pub fn kind(&self) -> &'static str {
        match (self.left, self.right) {
            (true, true) => "two-sided",
            (true, false) => "left",
            (false, true) => "right",
            (false, false) => "none",
        }
    }

    pub fn primitive(&self) -> bool {
        match (self.left, self.right) {
            (true, true) => self.left_primitive && self.right_primitive,
            (true, false) => self.left_primitive,
            (false, true) => self.right_primitive,
            (false, false) => false,
        }
    }
}

/// The full face through an ordered edge, as a cyclic sequence starting at it.
pub fn full_face_through(g: &RibbonGraph, i: OrderedEdge) -> Option<Vec<OrderedEdge>> {
    let mut seq = vec![i];
    let mut cur = i;
    loop {
        let (nx, desc) = face_successor(g, cur);
        if !desc {
            return None;
        }
        if nx == i {
            return Some(seq);
        }
        seq.push(nx);
        cur = nx;
    }
}

fn left_resolvable(g: &RibbonGraph, edges: &[OrderedEdge]) -> bool {
    if edges.len() < 2 || full_face_through(g, edges[0]).is_none() {
        return false;
    }
    let w = Walk {
        edges: edges.to_vec(),
        base: 0,
    };
    match w.prefix_degrees(g) {
        Ok(ds) => ds.iter().all(|&d| d >= 0),
        Err(_) => false,
    }
}

fn left_primitive(g: &RibbonGraph, edges: &[OrderedEdge]) -> bool {
    let face = full_face_through(g, edges[0]).expect("left resolvable");
    let l = edges.len() - 1;
    for s in 2..=l {
        let on_face = (0..s).all(|t| edges[t] == face[t % face.len()]);
        if on_face && left_resolvable(g, &edges[s - 1..]) {
            return false;
        }
    }
    true
}

/// Left/right resolvability; right resolvability of w is left resolvability of w⁻¹.
/// Primitivity only considers forward powers of the full face through the first edge.
pub fn resolvable_classify(g: &RibbonGraph, w: &Walk) -> Resolvability {
    if !w.is_reduced() || w.is_trivial() {
        return Resolvability::default();
    }
    let inv = w.inverse();
    let left = left_resolvable(g, &w.edges);
    let right = left_resolvable(g, &inv.edges);
    Resolvability {
        left,
        right,
        left_primitive: left && left_primitive(g, &w.edges),
        right_primitive: right && left_primitive(g, &inv.edges),
    }
}

/// All ordered edges.
pub fn ordered_edges(g: &RibbonGraph) -> Vec<OrderedEdge> {
    (0..g.num_edges())
        .flat_map(|e| [OrderedEdge::new(e, false), OrderedEdge::new(e, true)])
        .collect()
}

/// Every reduced walk with 1 ≤ length ≤ `max_len`.
pub fn enumerate_reduced_walks(g: &RibbonGraph, max_len: usize) -> Vec<Walk> {
    let oe = ordered_edges(g);
    let mut out = Vec::new();
    let mut stack: Vec<Vec<OrderedEdge>> = oe.iter().map(|&e| vec![e]).collect();
    stack.reverse();
    while let Some(p) = stack.pop() {
        let last = *p.last().unwrap();
        if p.len() < max_len {
            for &j in oe.iter().rev() {
                if j != last.inverse() && concatenable(g, last, j) {
                    let mut q = p.clone();
                    q.push(j);
                    stack.push(q);
                }
            }
        }
        let base = g.vertex_of(p[0].th(g));
        out.push(Walk { edges: p, base });
    }
    out
}
