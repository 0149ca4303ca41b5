//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use gentlekit::random::{random_instance, rng_from_seed, Shape};
use gentlekit::{BoundQuiver, GentleInstance, RibbonGraph, Walk};

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

pub fn load(name: &str) -> GentleInstance {
    GentleInstance::load(data_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// The worked examples, as loaded from `data/`.
pub const NAMED: [&str; 9] = [
    "amiot0.quiver",
    "amiot1.quiver",
    "amiot2.quiver",
    "loop.quiver",
    "nonpalin.quiver",
    "sixvertex.quiver",
    "small2.quiver",
    "twosided.rgraph.json",
    "amiot1-oriented.rgraph.json",
];

pub fn named_instances() -> Vec<(String, GentleInstance)> {
    NAMED.iter().map(|n| (n.to_string(), load(n))).collect()
}

/// Reproducible random instances (▽ of random marked ribbon graphs).
pub fn random_instances(
    seed: u64,
    count: usize,
    max_vertices: usize,
    max_extra: usize,
) -> Vec<GentleInstance> {
    let mut rng = rng_from_seed(seed);
    (0..count)
        .map(|_| random_instance(&mut rng, max_vertices, max_extra, Shape::Any))
        .collect()
}

// ---------------------------------------------------------------------------
// Cartan matrix by path enumeration

/// C[t][s] = number of nonzero paths from s to t in kQ/I, counted by BFS over
/// arrow sequences avoiding the relations.
pub fn oracle_cartan(q: &BoundQuiver) -> Vec<Vec<i64>> {
    let n = q.num_vertices();
    let ar = q.arrows();
    let mut c = vec![vec![0i64; n]; n];
    for s in 0..n {
        c[s][s] += 1;
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new(); // (last arrow, length)
        for (a, arrow) in ar.iter().enumerate() {
            if arrow.source == s {
                queue.push_back((a, 1));
            }
        }
        while let Some((last, len)) = queue.pop_front() {
            assert!(
                len <= 4 * ar.len() + 4,
                "path algebra is not finite dimensional"
            );
            c[ar[last].target][s] += 1;
            for (a, arrow) in ar.iter().enumerate() {
                if arrow.source == ar[last].target && !q.relations().contains(&(a, last)) {
                    queue.push_back((a, len + 1));
                }
            }
        }
    }
    c
}

pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (r, c) = (m.len(), m.first().map_or(0, Vec::len));
    (0..c).map(|j| (0..r).map(|i| m[i][j]).collect()).collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let k = b.len();
    let c = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..c)
                .map(|j| (0..k).map(|t| row[t] * b[t][j]).sum())
                .collect()
        })
        .collect()
}

pub fn mat_add(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p + q).collect())
        .collect()
}

/// Incidence matrix read straight off the half-edges: row e has +1 at each end.
pub fn oracle_incidence(g: &RibbonGraph) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; g.num_vertices()]; g.num_edges()];
    for h in g.half_edges() {
        m[h.edge][h.vertex] += 1;
    }
    m
}

// ---------------------------------------------------------------------------
// Exact rank and determinant over i128

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Rank by integer row reduction with gcd normalisation.
pub fn oracle_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        for i in 0..rows {
            if i != rank && a[i][col] != 0 {
                let (x, y) = (a[rank][col], a[i][col]);
                for j in 0..cols {
                    a[i][j] = a[i][j] * x - a[rank][j] * y;
                }
                let g = a[i].iter().fold(0, |acc, &v| gcd(acc, v));
                if g > 1 {
                    a[i].iter_mut().for_each(|v| *v /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant by cofactor expansion (small matrices only).
pub fn oracle_det(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0] as i128;
    }
    let mut d = 0i128;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &v)| v)
                    .collect()
            })
            .collect();
        let s = if j % 2 == 0 { 1 } else { -1 };
        d += s * m[0][j] as i128 * oracle_det(&minor);
    }
    d
}

// ---------------------------------------------------------------------------
// Graph structure

/// 2-colouring of the underlying graph; loops make it non-bipartite.
pub fn oracle_bipartite(g: &RibbonGraph) -> bool {
    let n = g.num_vertices();
    let ends: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| (g.vertex_of(e.target), g.vertex_of(e.source)))
        .collect();
    let mut colour = vec![-1i8; n];
    colour[0] = 0;
    let mut changed = true;
    while changed {
        changed = false;
        for &(a, b) in &ends {
            for (x, y) in [(a, b), (b, a)] {
                if colour[x] >= 0 {
                    if colour[y] < 0 {
                        colour[y] = 1 - colour[x];
                        changed = true;
                    } else if colour[y] == colour[x] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ---------------------------------------------------------------------------
// Walk data recomputed from positions

/// (degree, K₀ class as alternating sum of terms at cumulative degrees), for shift m.
pub fn oracle_walk_class(g: &RibbonGraph, w: &Walk, m: i64) -> (i64, Vec<i64>) {
    let e = w.edges();
    let mut v = vec![0i64; g.num_edges()];
    let mut d = 0i64;
    for t in 0..e.len() {
        if t > 0 {
            let a = g.pos(e[t - 1].sh(g));
            let b = g.pos(e[t].th(g));
            assert_ne!(a, b, "backtrack");
            d += if a < b { 1 } else { -1 };
        }
        v[e[t].edge] += if (m + d).rem_euclid(2) == 0 { 1 } else { -1 };
    }
    (d, v)
}

/// ½ xᵗʳ M x.
pub fn half_form(m: &[Vec<i64>], x: &[i64]) -> i64 {
    let mut s = 0;
    for i in 0..x.len() {
        for j in 0..x.len() {
            s += x[i] * m[i][j] * x[j];
        }
    }
    assert_eq!(s % 2, 0);
    s / 2
}

// ---------------------------------------------------------------------------
// String functions by exhaustive search

/// Number of pairs (S, T) of string functions, by backtracking over all ±1 assignments.
pub fn oracle_string_function_count(q: &BoundQuiver) -> u64 {
    let ar = q.arrows();
    let m = ar.len();
    let rel = q.relations();
    // check all constraints among arrows 0..=k
    let ok = |s: &[i8], t: &[i8], k: usize| -> bool {
        for a in 0..=k {
            let b = k;
            for (x, y) in [(a, b), (b, a)] {
                if x == y {
                    if ar[x].target == ar[x].source && rel.contains(&(x, x)) != (t[x] == s[x]) {
                        return false;
                    }
                    continue;
                }
                if ar[x].source == ar[y].source && s[x] == s[y] {
                    return false;
                }
                if ar[x].target == ar[y].target && t[x] == t[y] {
                    return false;
                }
                if ar[x].target == ar[y].source && rel.contains(&(y, x)) != (t[x] == s[y]) {
                    return false;
                }
            }
        }
        true
    };
    fn rec(
        k: usize,
        m: usize,
        s: &mut Vec<i8>,
        t: &mut Vec<i8>,
        ok: &dyn Fn(&[i8], &[i8], usize) -> bool,
    ) -> u64 {
        if k == m {
            return 1;
        }
        let mut total = 0;
        for sv in [1i8, -1] {
            for tv in [1i8, -1] {
                s[k] = sv;
                t[k] = tv;
                if ok(s, t, k) {
                    total += rec(k + 1, m, s, t, ok);
                }
            }
        }
        total
    }
    let (mut s, mut t) = (vec![0i8; m], vec![0i8; m]);
    rec(0, m, &mut s, &mut t, &ok)
}

// ---------------------------------------------------------------------------
// Roots of a positive definite form in a box

/// All nonzero x with ½xᵗʳGx ≤ `max`, searching |x_i| ≤ ⌊√(2·max·det(G_ii)/det G)⌋.
/// Requires G positive definite.
pub fn oracle_box_roots(gram: &[Vec<i64>], max: i64) -> Vec<(Vec<i64>, i64)> {
    let n = gram.len();
    let det = oracle_det(gram);
    assert!(det > 0, "form is not positive definite");
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&a| a != i)
                .map(|a| (0..n).filter(|&b| b != i).map(|b| gram[a][b]).collect())
                .collect();
            let rhs = 2 * max as i128 * oracle_det(&minor);
            let mut k = 0i64;
            while ((k + 1) as i128).pow(2) * det <= rhs {
                k += 1;
            }
            k
        })
        .collect();
    let mut out = Vec::new();
    let mut x: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        if x.iter().any(|&v| v != 0) {
            let v = half_form(gram, &x);
            if v <= max {
                out.push((x.clone(), v));
            }
        }
        // odometer over the box
        let mut i = 0;
        while i < n && x[i] == bounds[i] {
            x[i] = -bounds[i];
            i += 1;
        }
        if i == n {
            return out;
        }
        x[i] += 1;
    }
}

/// Roots of each value, as sets.
pub fn box_root_sets(gram: &[Vec<i64>]) -> (BTreeSet<Vec<i64>>, BTreeSet<Vec<i64>>) {
    let mut ones = BTreeSet::new();
    let mut twos = BTreeSet::new();
    for (x, v) in oracle_box_roots(gram, 2) {
        match v {
            1 => {
                ones.insert(x);
            }
            2 => {
                twos.insert(x);
            }
            _ => {}
        }
    }
    (ones, twos)
}

// ---------------------------------------------------------------------------
// Small connected multigraphs

/// Connected multigraphs (loops allowed) with 1..=`max_edges` edges, as sorted
/// edge lists on vertices 0..n, where vertices are introduced in increasing order.
/// Isomorphic copies may repeat; every isomorphism class appears.
pub fn small_multigraphs(max_edges: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    // a BFS labelling of any connected graph has this form, so every class appears
    fn rec(
        edges: &mut Vec<(usize, usize)>,
        nv: usize,
        max_edges: usize,
        out: &mut Vec<(usize, Vec<(usize, usize)>)>,
    ) {
        if !edges.is_empty() {
            out.push((nv, edges.clone()));
        }
        if edges.len() == max_edges {
            return;
        }
        let last = edges.last().copied().unwrap_or((0, 0));
        for a in 0..nv {
            for b in a..=nv {
                if (a, b) < last {
                    continue;
                }
                edges.push((a, b));
                rec(edges, nv + (b == nv) as usize, max_edges, out);
                edges.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 1, max_edges, &mut out);
    out
}

/// Cycle rank and bipartiteness decide positivity: tree, or one cycle of odd length.
pub fn oracle_brauer_positive(nv: usize, edges: &[(usize, usize)]) -> bool {
    let cycles = edges.len() as i64 - nv as i64 + 1;
    if cycles == 0 {
        return true;
    }
    if cycles > 1 {
        return false;
    }
    // one cycle: odd iff not 2-colourable
    let mut colour = vec![-1i8; nv];
    colour[0] = 0;
    for _ in 0..nv {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if colour[x] >= 0 && colour[y] < 0 {
                    colour[y] = 1 - colour[x];
                }
            }
        }
    }
    edges.iter().any(|&(a, b)| colour[a] == colour[b])
}
