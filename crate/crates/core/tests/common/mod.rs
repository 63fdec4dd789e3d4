#![allow(dead_code)]

use std::collections::BTreeSet;

use lzero_core::{FiniteGraph, Vertex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn label(i: usize) -> Vertex {
    Vertex::label(i as u64)
}

/// A random oriented forest on `n` labels: each vertex after the first
/// attaches to an earlier one with probability `attach`.
pub fn random_forest(rng: &mut ChaCha8Rng, n: usize, attach: f64, oriented: bool) -> FiniteGraph {
    let mut edges = Vec::new();
    for i in 1..n {
        if rng.gen_bool(attach) {
            let j = rng.gen_range(0..i);
            edges.push(if rng.gen_bool(0.5) { (i, j) } else { (j, i) });
        }
    }
    FiniteGraph::from_labels(n, edges, oriented).unwrap()
}

/// A random walk of `steps` steps from `start`, staying put on isolated vertices.
pub fn random_walk(rng: &mut ChaCha8Rng, g: &FiniteGraph, start: usize, steps: usize) -> Vec<Vertex> {
    let mut cur = start;
    let mut out = vec![g.vertex(cur)];
    for _ in 0..steps {
        let nbrs: Vec<usize> = g.neighbors(cur).collect();
        if nbrs.is_empty() {
            break;
        }
        cur = nbrs[rng.gen_range(0..nbrs.len())];
        out.push(g.vertex(cur));
    }
    out
}

pub fn random_subset(rng: &mut ChaCha8Rng, g: &FiniteGraph, p: f64) -> BTreeSet<Vertex> {
    g.vertices().iter().copied().filter(|_| rng.gen_bool(p)).collect()
}

/// Floyd-Warshall over the underlying undirected graph.
#[allow(clippy::needless_range_loop)]
pub fn all_pairs(g: &FiniteGraph) -> Vec<Vec<Option<usize>>> {
    let n = g.vertex_count();
    let mut d = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(0);
    }
    for &(a, b) in g.edge_indices() {
        d[a][b] = Some(1);
        d[b][a] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(x), Some(y)) = (d[i][k], d[k][j]) {
                    if d[i][j].is_none_or(|z| x + y < z) {
                        d[i][j] = Some(x + y);
                    }
                }
            }
        }
    }
    d
}
