//! Bound quivers with quadratic monomial relations, the gentleness test, and
//! the thread combinatorics (permitted/forbidden threads, full cycles) that
//! everything else is built on.
//!
//! Paths compose right to left: the relation `a.b` is the path "first `b`,
//! then `a`". A thread `α1 α2 … αℓ` therefore starts (in traversal order) with
//! `αℓ` and ends with `α1`; its centers are `v0 = t(α1)` and `vt = s(αt)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use thiserror::Error;

use crate::exact_linalg::IntMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuiverError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("line {line}: unknown arrow `{name}`")]
    UnknownArrow { line: usize, name: String },
    #[error("line {line}: duplicate {what} `{name}`")]
    Duplicate {
        line: usize,
        what: &'static str,
        name: String,
    },
    #[error("relation {a}.{b} is not composable: t({b}) != s({a})")]
    NotComposable { a: String, b: String },
    #[error("quiver has no arrows")]
    NoArrows,
    #[error("quiver is not connected")]
    Disconnected,
    #[error("not gentle, condition ({condition}) fails at {location}: {detail}")]
    Gentleness {
        condition: char,
        location: String,
        detail: String,
    },
    #[error("ideal is not admissible: permitted cycle {0}")]
    NotAdmissible(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A quiver together with a set of length-two monomial relations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundQuiver {
    vertices: Vec<String>,
    arrows: Vec<Arrow>,
    /// `(a, b)` means the path `a·b` (b first) lies in the ideal.
    relations: BTreeSet<(usize, usize)>,
}

impl BoundQuiver {
    /// Builds and validates a bound quiver. Arrow endpoints index into `vertices`.
    pub fn new(
        vertices: Vec<String>,
        arrows: Vec<Arrow>,
        relations: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, QuiverError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.clone()) {
                return Err(QuiverError::Duplicate {
                    line: 0,
                    what: "vertex",
                    name: v.clone(),
                });
            }
        }
        let mut seen = BTreeSet::new();
        for a in &arrows {
            if !seen.insert(a.name.clone()) {
                return Err(QuiverError::Duplicate {
                    line: 0,
                    what: "arrow",
                    name: a.name.clone(),
                });
            }
            assert!(
                a.source < vertices.len() && a.target < vertices.len(),
                "arrow endpoint out of range"
            );
        }
        let relations: BTreeSet<(usize, usize)> = relations.into_iter().collect();
        for &(a, b) in &relations {
            if arrows[b].target != arrows[a].source {
                return Err(QuiverError::NotComposable {
                    a: arrows[a].name.clone(),
                    b: arrows[b].name.clone(),
                });
            }
        }
        if arrows.is_empty() {
            return Err(QuiverError::NoArrows);
        }
        let q = BoundQuiver {
            vertices,
            arrows,
            relations,
        };
        if !q.is_connected() {
            return Err(QuiverError::Disconnected);
        }
        Ok(q)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn relations(&self) -> &BTreeSet<(usize, usize)> {
        &self.relations
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Is `a·b` in the ideal?
    pub fn in_ideal(&self, a: usize, b: usize) -> bool {
        self.relations.contains(&(a, b))
    }

    pub fn out_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == v)
            .collect()
    }

    pub fn in_arrows(&self, v: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].target == v)
            .collect()
    }

    /// Number of arrow ends at `v` (a loop counts twice).
    pub fn degree(&self, v: usize) -> usize {
        self.out_arrows(v).len() + self.in_arrows(v).len()
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for a in &self.arrows {
                for (x, y) in [(a.source, a.target), (a.target, a.source)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Canonical text form, parseable by [`parse_quiver`].
    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "vertices {};", self.vertices.join(" ")).unwrap();
        for a in &self.arrows {
            writeln!(
                out,
                "arrow {}: {} -> {};",
                a.name, self.vertices[a.source], self.vertices[a.target]
            )
            .unwrap();
        }
        for &(a, b) in &self.relations {
            writeln!(out, "rel {}.{};", self.arrows[a].name, self.arrows[b].name).unwrap();
        }
        out
    }

    /// Order-independent structural key: vertex names, arrows by name, relations by name.
    pub fn structural_key(
        &self,
    ) -> (
        Vec<String>,
        Vec<(String, String, String)>,
        Vec<(String, String)>,
    ) {
        let mut vs = self.vertices.clone();
        vs.sort();
        let mut arrows: Vec<_> = self
            .arrows
            .iter()
            .map(|a| {
                (
                    a.name.clone(),
                    self.vertices[a.source].clone(),
                    self.vertices[a.target].clone(),
                )
            })
            .collect();
        arrows.sort();
        let mut rels: Vec<_> = self
            .relations
            .iter()
            .map(|&(a, b)| (self.arrows[a].name.clone(), self.arrows[b].name.clone()))
            .collect();
        rels.sort();
        (vs, arrows, rels)
    }
}

// ---------------------------------------------------------------------------
// DSL

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Arrow,
    Colon,
    Dot,
    Semi,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, QuiverError> {
    let mut out = Vec::new();
    for (lno, line) in text.lines().enumerate() {
        let line_no = lno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push((Tok::Arrow, line_no, col));
                i += 2;
            } else if c == ':' {
                out.push((Tok::Colon, line_no, col));
                i += 1;
            } else if c == '.' {
                out.push((Tok::Dot, line_no, col));
                i += 1;
            } else if c == ';' {
                out.push((Tok::Semi, line_no, col));
                i += 1;
            } else if c.is_alphanumeric() || c == '_' || c == '\'' {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push((Tok::Ident(chars[start..i].iter().collect()), line_no, col));
            } else {
                return Err(QuiverError::Syntax {
                    line: line_no,
                    col,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
    }
    Ok(out)
}

/// Parses the quiver DSL:
///
/// ```text
/// vertices 1 2 3;
/// arrow a1: 1 -> 2;
/// arrow a2: 2 -> 3;
/// rel a2.a1;        # a1 then a2 is zero
/// ```
pub fn parse_quiver(text: &str) -> Result<BoundQuiver, QuiverError> {
    let toks = lex(text)?;
    let mut vertices: Vec<String> = Vec::new();
    let mut vindex: HashMap<String, usize> = HashMap::new();
    let mut arrows: Vec<Arrow> = Vec::new();
    let mut aindex: HashMap<String, usize> = HashMap::new();
    let mut rels: Vec<(String, String, usize)> = Vec::new();

    let end = toks.last().map(|t| (t.1, t.2 + 1)).unwrap_or((1, 1));
    let mut pos = 0;
    let syntax = |pos: usize, msg: &str| {
        let (line, col) = toks.get(pos).map(|t| (t.1, t.2)).unwrap_or(end);
        QuiverError::Syntax {
            line,
            col,
            msg: msg.to_string(),
        }
    };
    let ident = |pos: usize, what: &str| -> Result<String, QuiverError> {
        match toks.get(pos) {
            Some((Tok::Ident(s), _, _)) => Ok(s.clone()),
            _ => Err(syntax(pos, &format!("expected {what}"))),
        }
    };
    let expect = |pos: usize, t: Tok, what: &str| -> Result<(), QuiverError> {
        match toks.get(pos) {
            Some((x, _, _)) if *x == t => Ok(()),
            _ => Err(syntax(pos, &format!("expected `{what}`"))),
        }
    };

    while pos < toks.len() {
        let line = toks[pos].1;
        let kw = ident(pos, "`vertices`, `arrow` or `rel`")?;
        pos += 1;
        match kw.as_str() {
            "vertices" => {
                let mut any = false;
                while let Some((Tok::Ident(v), l, _)) = toks.get(pos) {
                    if vindex.contains_key(v) {
                        return Err(QuiverError::Duplicate {
                            line: *l,
                            what: "vertex",
                            name: v.clone(),
                        });
                    }
                    vindex.insert(v.clone(), vertices.len());
                    vertices.push(v.clone());
                    any = true;
                    pos += 1;
                }
                if !any {
                    return Err(syntax(pos, "expected at least one vertex id"));
                }
            }
            "arrow" => {
                let name = ident(pos, "arrow name")?;
                pos += 1;
                expect(pos, Tok::Colon, ":")?;
                pos += 1;
                let src = ident(pos, "source vertex")?;
                pos += 1;
                expect(pos, Tok::Arrow, "->")?;
                pos += 1;
                let tgt = ident(pos, "target vertex")?;
                pos += 1;
                if aindex.contains_key(&name) {
                    return Err(QuiverError::Duplicate {
                        line,
                        what: "arrow",
                        name,
                    });
                }
                let s = *vindex
                    .get(&src)
                    .ok_or(QuiverError::UnknownVertex { line, name: src })?;
                let t = *vindex
                    .get(&tgt)
                    .ok_or(QuiverError::UnknownVertex { line, name: tgt })?;
                aindex.insert(name.clone(), arrows.len());
                arrows.push(Arrow {
                    name,
                    source: s,
                    target: t,
                });
            }
            "rel" => {
                let a = ident(pos, "arrow name")?;
                pos += 1;
                expect(pos, Tok::Dot, ".")?;
                pos += 1;
                let b = ident(pos, "arrow name")?;
                pos += 1;
                if let Some((Tok::Dot, _, _)) = toks.get(pos) {
                    return Err(syntax(pos, "relations must be paths of length exactly 2"));
                }
                rels.push((a, b, line));
            }
            other => {
                return Err(syntax(pos - 1, &format!("unknown statement `{other}`")));
            }
        }
        expect(pos, Tok::Semi, ";")?;
        pos += 1;
    }
    if vertices.is_empty() {
        return Err(QuiverError::Syntax {
            line: end.0,
            col: end.1,
            msg: "missing `vertices` statement".into(),
        });
    }
    let mut relations = Vec::new();
    for (a, b, line) in rels {
        let ia = *aindex
            .get(&a)
            .ok_or(QuiverError::UnknownArrow { line, name: a })?;
        let ib = *aindex
            .get(&b)
            .ok_or(QuiverError::UnknownArrow { line, name: b })?;
        relations.push((ia, ib));
    }
    BoundQuiver::new(vertices, arrows, relations)
}

// ---------------------------------------------------------------------------
// Threads

/// A permitted or forbidden thread `α1 … αℓ` (possibly trivial).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thread {
    pub name: String,
    /// Arrow indices α1..αℓ; α1 is the terminating arrow.
    pub arrows: Vec<usize>,
    /// Vertices v0..vℓ with v0 = t(α1) and vt = s(αt).
    pub centers: Vec<usize>,
}

impl Thread {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn target(&self) -> usize {
        self.centers[0]
    }

    pub fn source(&self) -> usize {
        *self.centers.last().unwrap()
    }

    /// Repeated centers: `Some(i)` for the first vertex visited twice.
    pub fn self_crossings(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.centers.len() {
            for b in (a + 1)..self.centers.len() {
                if self.centers[a] == self.centers[b] {
                    out.push((self.centers[a], a, b));
                }
            }
        }
        out
    }
}

/// A gentle bound quiver with its threads computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GentleQuiver {
    base: BoundQuiver,
    permitted: Vec<Thread>,
    forbidden: Vec<Thread>,
    full_cycles: Vec<Vec<usize>>,
}

/// α ↦ the unique γ with s(γ) = t(α) and (γα ∈ I) == `in_ideal`.
fn successor_map(q: &BoundQuiver, in_ideal: bool) -> Vec<Option<usize>> {
    (0..q.arrows.len())
        .map(|b| {
            q.out_arrows(q.arrows[b].target)
                .into_iter()
                .find(|&a| q.in_ideal(a, b) == in_ideal)
        })
        .collect()
}

fn thread_name(q: &BoundQuiver, arrows: &[usize]) -> String {
    arrows
        .iter()
        .map(|&a| q.arrows[a].name.as_str())
        .collect::<Vec<_>>()
        .join(".")
}

fn make_thread(q: &BoundQuiver, arrows: Vec<usize>) -> Thread {
    let mut centers = vec![q.arrows[arrows[0]].target];
    centers.extend(arrows.iter().map(|&a| q.arrows[a].source));
    Thread {
        name: thread_name(q, &arrows),
        arrows,
        centers,
    }
}

fn trivial_thread(q: &BoundQuiver, v: usize) -> Thread {
    Thread {
        name: format!("triv:{}", q.vertices[v]),
        arrows: vec![],
        centers: vec![v],
    }
}

/// Maximal chains of a successor map, as threads (α1 = last arrow of the chain).
/// Also returns the cycles of the map.
fn chains_and_cycles(q: &BoundQuiver, succ: &[Option<usize>]) -> (Vec<Thread>, Vec<Vec<usize>>) {
    let n = succ.len();
    let mut has_pred = vec![false; n];
    for s in succ.iter().flatten() {
        has_pred[*s] = true;
    }
    let mut used = vec![false; n];
    let mut threads = Vec::new();
    for start in 0..n {
        if has_pred[start] {
            continue;
        }
        let mut chain = vec![start];
        used[start] = true;
        let mut cur = start;
        while let Some(nx) = succ[cur] {
            chain.push(nx);
            used[nx] = true;
            cur = nx;
        }
        chain.reverse();
        threads.push(make_thread(q, chain));
    }
    let mut cycles = Vec::new();
    for start in 0..n {
        if used[start] {
            continue;
        }
        let mut cyc = vec![start];
        used[start] = true;
        let mut cur = succ[start].expect("arrow on a cycle has a successor");
        while cur != start {
            cyc.push(cur);
            used[cur] = true;
            cur = succ[cur].expect("arrow on a cycle has a successor");
        }
        // write in right-to-left order, rotated so that the smallest arrow comes first
        cyc.reverse();
        let k = (0..cyc.len()).min_by_key(|&i| cyc[i]).unwrap();
        cyc.rotate_left(k);
        cycles.push(cyc);
    }
    (threads, cycles)
}

fn sort_threads(q: &BoundQuiver, threads: &mut [Thread]) {
    threads.sort_by(|x, y| {
        let key = |t: &Thread| match t.arrows.iter().map(|&a| q.arrows[a].name.clone()).min() {
            Some(name) => (0, name, 0),
            None => (1, String::new(), t.centers[0]),
        };
        key(x).cmp(&key(y))
    });
}

impl GentleQuiver {
    /// Checks the gentleness conditions and admissibility, then computes threads.
    pub fn new(base: BoundQuiver) -> Result<Self, QuiverError> {
        let q = &base;
        for v in 0..q.num_vertices() {
            let (o, i) = (q.out_arrows(v).len(), q.in_arrows(v).len());
            if o > 2 || i > 2 {
                return Err(QuiverError::Gentleness {
                    condition: 'a',
                    location: format!("vertex {}", q.vertices[v]),
                    detail: format!("deg+ = {o}, deg- = {i}"),
                });
            }
        }
        for b in 0..q.num_arrows() {
            let after = q.out_arrows(q.arrows[b].target);
            let before = q.in_arrows(q.arrows[b].source);
            for (cond, want) in [('b', false), ('c', true)] {
                let left: Vec<_> = after
                    .iter()
                    .filter(|&&a| q.in_ideal(a, b) == want)
                    .collect();
                let right: Vec<_> = before
                    .iter()
                    .filter(|&&g| q.in_ideal(b, g) == want)
                    .collect();
                if left.len() > 1 || right.len() > 1 {
                    let what = if want { "in I" } else { "not in I" };
                    return Err(QuiverError::Gentleness {
                        condition: cond,
                        location: format!("arrow {}", q.arrows[b].name),
                        detail: format!(
                            "more than one composition with {} {}",
                            q.arrows[b].name, what
                        ),
                    });
                }
            }
        }

        let psucc = successor_map(q, false);
        let (mut permitted, pcycles) = chains_and_cycles(q, &psucc);
        if let Some(c) = pcycles.first() {
            return Err(QuiverError::NotAdmissible(thread_name(q, c)));
        }
        let fsucc = successor_map(q, true);
        let (mut forbidden, full_cycles) = chains_and_cycles(q, &fsucc);

        for v in 0..q.num_vertices() {
            let ins = q.in_arrows(v);
            let outs = q.out_arrows(v);
            let deg = ins.len() + outs.len();
            let pair_rel = (deg == 2 && ins.len() == 1 && outs.len() == 1)
                .then(|| q.in_ideal(outs[0], ins[0]));
            if deg == 1 || pair_rel == Some(false) {
                permitted.push(trivial_thread(q, v));
            }
            if deg == 1 || pair_rel == Some(true) {
                forbidden.push(trivial_thread(q, v));
            }
        }
        sort_threads(q, &mut permitted);
        sort_threads(q, &mut forbidden);
        let gq = GentleQuiver {
            base,
            permitted,
            forbidden,
            full_cycles,
        };
        debug_assert_eq!(
            gq.permitted.len() as i64,
            2 * gq.base.num_vertices() as i64 - gq.base.num_arrows() as i64
        );
        Ok(gq)
    }

    pub fn parse(text: &str) -> Result<Self, QuiverError> {
        GentleQuiver::new(parse_quiver(text)?)
    }

    pub fn base(&self) -> &BoundQuiver {
        &self.base
    }

    pub fn permitted(&self) -> &[Thread] {
        &self.permitted
    }

    pub fn forbidden(&self) -> &[Thread] {
        &self.forbidden
    }

    pub fn full_cycles(&self) -> &[Vec<usize>] {
        &self.full_cycles
    }

    pub fn gl_dim_finite(&self) -> bool {
        self.full_cycles.is_empty()
    }

    pub fn n(&self) -> usize {
        self.base.num_vertices()
    }

    pub fn render(&self) -> String {
        self.base.render()
    }

    /// Permitted thread containing each arrow, with its position (1-based).
    pub fn arrow_positions(&self) -> Vec<(usize, usize)> {
        let mut out = vec![(usize::MAX, 0); self.base.num_arrows()];
        for (k, th) in self.permitted.iter().enumerate() {
            for (t, &a) in th.arrows.iter().enumerate() {
                out[a] = (k, t + 1);
            }
        }
        out
    }

    /// Cartan matrix: entry (j, i) counts permitted paths from i to j.
    pub fn cartan_matrix(&self) -> IntMatrix {
        let n = self.n();
        let mut c = IntMatrix::identity(n);
        for th in &self.permitted {
            for a in 0..th.centers.len() {
                for b in (a + 1)..th.centers.len() {
                    c.add_at(th.centers[a], th.centers[b], 1);
                }
            }
        }
        c
    }

    /// Vertices at which some permitted thread passes twice.
    pub fn self_crossing_vertices(&self) -> BTreeSet<usize> {
        self.permitted
            .iter()
            .flat_map(|t| t.self_crossings())
            .map(|(v, _, _)| v)
            .collect()
    }

    /// Almost-full cycles as (vertex, length); only meaningful for finite global dimension,
    /// where they are exactly the self-crossings of forbidden threads.
    pub fn almost_full_cycles(&self) -> Vec<(usize, usize)> {
        self.forbidden
            .iter()
            .flat_map(|t| t.self_crossings())
            .map(|(v, a, b)| (v, b - a))
            .collect()
    }

    /// Half-edge slots: for each vertex, its two (thread index, position) occurrences
    /// among permitted threads, in increasing order.
    pub fn permitted_slots(&self) -> Vec<[(usize, usize); 2]> {
        slots(self.n(), &self.permitted)
    }

    pub fn forbidden_slots(&self) -> Option<Vec<[(usize, usize); 2]>> {
        self.gl_dim_finite()
            .then(|| slots(self.n(), &self.forbidden))
    }

    /// Φ1: permitted → forbidden threads (indices). Errors if the target is not unique.
    pub fn phi1(&self) -> Result<Vec<usize>, String> {
        self.phi_generic(&self.permitted, &self.forbidden, true)
    }

    /// Φ2: forbidden → permitted threads, the dual of Φ1 with respect to sources.
    pub fn phi2(&self) -> Result<Vec<usize>, String> {
        self.phi_generic(&self.forbidden, &self.permitted, false)
    }

    /// Shared body of Φ1 (`by_target`) and Φ2 (dual).
    fn phi_generic(
        &self,
        from: &[Thread],
        to: &[Thread],
        by_target: bool,
    ) -> Result<Vec<usize>, String> {
        let q = &self.base;
        let end = |t: &Thread| if by_target { t.target() } else { t.source() };
        let end_arrow = |t: &Thread| {
            if by_target {
                t.arrows.first().copied()
            } else {
                t.arrows.last().copied()
            }
        };
        let mut out = Vec::with_capacity(from.len());
        for th in from {
            let cands: Vec<usize> = match end_arrow(th) {
                Some(a) => (0..to.len())
                    .filter(|&k| end(&to[k]) == end(th) && end_arrow(&to[k]) != Some(a))
                    .collect(),
                None => {
                    let v = th.centers[0];
                    let adj = if by_target {
                        q.in_arrows(v)
                    } else {
                        q.out_arrows(v)
                    };
                    match adj.as_slice() {
                        [] => (0..to.len())
                            .filter(|&k| to[k].is_trivial() && to[k].centers[0] == v)
                            .collect(),
                        [a] => (0..to.len())
                            .filter(|&k| end_arrow(&to[k]) == Some(*a))
                            .collect(),
                        _ => vec![],
                    }
                }
            };
            match cands.as_slice() {
                [k] => out.push(*k),
                _ => {
                    return Err(format!(
                        "{} of thread {} is not unique ({} candidates)",
                        if by_target { "Φ1" } else { "Φ2" },
                        th.name,
                        cands.len()
                    ))
                }
            }
        }
        Ok(out)
    }

    /// Φ' on full-cycle arrows: α ↦ β with αβ ∈ I.
    pub fn phi_prime(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for cyc in &self.full_cycles {
            for &a in cyc {
                let b = self
                    .base
                    .in_arrows(self.base.arrows[a].source)
                    .into_iter()
                    .find(|&b| self.base.in_ideal(a, b))
                    .expect("full-cycle arrow has a relation predecessor");
                out.insert(a, b);
            }
        }
        out
    }
}

fn slots(n: usize, threads: &[Thread]) -> Vec<[(usize, usize); 2]> {
    let mut acc: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (k, th) in threads.iter().enumerate() {
        for (p, &v) in th.centers.iter().enumerate() {
            acc[v].push((k, p));
        }
    }
    acc.into_iter()
        .map(|mut v| {
            assert_eq!(
                v.len(),
                2,
                "every vertex is the center of exactly two split threads"
            );
            v.sort();
            [v[0], v[1]]
        })
        .collect()
}

/// A pair of Butler–Ringel string functions, indexed by arrow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StringFunctionPair {
    pub s: Vec<i8>,
    pub t: Vec<i8>,
}

impl StringFunctionPair {
    /// Checks the three string-function conditions.
    pub fn is_valid(&self, q: &BoundQuiver) -> bool {
        let ar = q.arrows();
        for a in 0..ar.len() {
            for b in 0..ar.len() {
                if a == b {
                    continue;
                }
                if ar[a].source == ar[b].source && self.s[a] == self.s[b] {
                    return false;
                }
                if ar[a].target == ar[b].target && self.t[a] == self.t[b] {
                    return false;
                }
                if ar[a].target == ar[b].source && q.in_ideal(b, a) != (self.t[a] == self.s[b]) {
                    return false;
                }
            }
        }
        // condition (3) also applies to a loop composed with itself
        for a in 0..ar.len() {
            if ar[a].source == ar[a].target && q.in_ideal(a, a) != (self.t[a] == self.s[a]) {
                return false;
            }
        }
        true
    }
}

/// String functions attached to a direction of the marked ribbon graph.
///
/// `direction[i]` chooses which of the two half-edges of edge `i` (vertex `i` of
/// the quiver) gets sign +1: `false` gives +1 to the smaller permitted slot.
pub fn string_functions(q: &GentleQuiver, direction: &[bool]) -> StringFunctionPair {
    assert_eq!(direction.len(), q.n());
    let slots = q.permitted_slots();
    let sigma = |k: usize, p: usize| -> i8 {
        let v = q.permitted()[k].centers[p];
        let first = slots[v][0] == (k, p);
        if first != direction[v] {
            1
        } else {
            -1
        }
    };
    let m = q.base().num_arrows();
    let mut s = vec![0; m];
    let mut t = vec![0; m];
    for (k, th) in q.permitted().iter().enumerate() {
        for (idx, &a) in th.arrows.iter().enumerate() {
            let pos = idx + 1;
            s[a] = sigma(k, pos);
            t[a] = -sigma(k, pos - 1);
        }
    }
    StringFunctionPair { s, t }
}

/// All 2^n string-function pairs obtained from directions.
pub fn all_direction_string_functions(q: &GentleQuiver) -> Vec<StringFunctionPair> {
    let n = q.n();
    (0u64..(1u64 << n))
        .map(|mask| {
            let dir: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
            string_functions(q, &dir)
        })
        .collect()
}
