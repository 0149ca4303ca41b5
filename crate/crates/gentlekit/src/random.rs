//! Random gentle quivers, generated as ▽ of random marked ribbon graphs:
//! a random connected multigraph (loops allowed) with random half-edge orders.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ribbon::{RibbonGraph, VertexSpec};
use crate::GentleInstance;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Any connected multigraph.
    Any,
    /// A tree (multi-clock, positive Euler form).
    Tree,
    /// One cycle, of odd length (loops count); positive Euler form.
    OddUnicyclic,
}

/// Vertex pairs of the edges of a random graph with `nv` vertices.
fn random_edges<R: Rng>(rng: &mut R, nv: usize, shape: Shape, extra: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    let mut depth = vec![0usize; nv];
    for v in 1..nv {
        let u = rng.gen_range(0..v);
        depth[v] = depth[u] + 1;
        edges.push((u, v));
    }
    match shape {
        Shape::Tree => {}
        Shape::OddUnicyclic => {
            // endpoints at even distance close an odd cycle; parity of tree distance = parity of depth sum
            loop {
                let (a, b) = (rng.gen_range(0..nv), rng.gen_range(0..nv));
                if (depth[a] + depth[b]).is_multiple_of(2) {
                    edges.push((a, b));
                    break;
                }
            }
        }
        Shape::Any => {
            for _ in 0..extra {
                edges.push((rng.gen_range(0..nv), rng.gen_range(0..nv)));
            }
        }
    }
    edges
}

/// A random marked ribbon graph. Every edge is traversed in a random reference orientation.
pub fn random_ribbon_graph<R: Rng>(
    rng: &mut R,
    nv: usize,
    shape: Shape,
    extra: usize,
) -> RibbonGraph {
    assert!(
        nv >= 1 && (shape != Shape::Tree || nv >= 3),
        "too few vertices for {shape:?}"
    );
    let mut edges = random_edges(rng, nv, shape, extra);
    // marked ribbon graphs need a vertex of degree ≥ 2
    if edges.len() <= 1 && edges.first().is_none_or(|&(a, b)| a != b) {
        edges.push((0, 0));
    }
    let mut halves: Vec<Vec<String>> = vec![Vec::new(); nv];
    let mut iota = Vec::new();
    for (k, &(a, b)) in edges.iter().enumerate() {
        let (ha, hb) = (format!("e{k}a"), format!("e{k}b"));
        halves[a].push(ha.clone());
        halves[b].push(hb.clone());
        iota.push(if rng.gen_bool(0.5) {
            (ha, hb)
        } else {
            (hb, ha)
        });
    }
    let specs = halves
        .into_iter()
        .enumerate()
        .map(|(v, mut hs)| {
            hs.shuffle(rng);
            VertexSpec {
                id: format!("v{v}"),
                half_edges: hs,
                arrow_names: None,
            }
        })
        .collect();
    RibbonGraph::from_parts(specs, iota, None, true).expect("random graph is a marked ribbon graph")
}

/// ▽ of a random marked ribbon graph with 1..=`max_vertices` vertices.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_extra_edges: usize,
    shape: Shape,
) -> GentleInstance {
    let least = if shape == Shape::Tree { 3 } else { 1 };
    let nv = rng.gen_range(least..=max_vertices.max(least));
    let extra = rng.gen_range(0..=max_extra_edges);
    let g = random_ribbon_graph(rng, nv, shape, extra);
    GentleInstance::from_graph(g).expect("▽ of a marked ribbon graph is gentle")
}
