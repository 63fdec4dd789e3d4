//! Seeded random inputs for the verification suites.

use std::collections::BTreeSet;

use lzero_core::hom::PartialHom;
use lzero_core::stage::build_stage;
use lzero_core::{DirectionWord, FiniteGraph, OddPair, OddSequence, Vertex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 0x1a2e_0000;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A forest on labels `0..n`: each vertex after the first joins a random
/// earlier vertex with probability `attach`, in a random direction.
pub fn random_forest(rng: &mut impl Rng, n: usize, attach: f64, oriented: bool) -> FiniteGraph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        if rng.gen_bool(attach) {
            let j = rng.gen_range(0..i);
            let (a, b) = (perm[i], perm[j]);
            edges.push(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
        }
    }
    FiniteGraph::from_labels(n, edges, oriented).expect("forest edges are simple")
}

/// A walk of `len` steps from vertex index `start`, stopping early at an
/// isolated vertex.
pub fn random_walk(rng: &mut impl Rng, g: &FiniteGraph, start: usize, len: usize) -> Vec<Vertex> {
    let mut at = start;
    let mut out = vec![g.vertex(at)];
    for _ in 0..len {
        let nbrs: Vec<usize> = g.neighbors(at).collect();
        let Some(&next) = nbrs.choose(rng) else { break };
        at = next;
        out.push(g.vertex(at));
    }
    out
}

pub fn random_subset(rng: &mut impl Rng, g: &FiniteGraph, p: f64) -> BTreeSet<Vertex> {
    g.vertices().iter().filter(|_| rng.gen_bool(p)).copied().collect()
}

pub fn random_word(rng: &mut impl Rng, len: usize) -> DirectionWord {
    DirectionWord::new((0..len).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect()).expect("entries are signs")
}

pub fn random_pair(rng: &mut impl Rng, c: &OddSequence) -> OddPair {
    let d = c.values().iter().map(|&ci| random_word(rng, ci as usize + 2)).collect();
    OddPair::new(c.clone(), d).expect("word lengths follow c")
}

/// Input to the one-step extension: `l` is a path forest on labels, `b` a
/// union of runs mapped into stage `n` by `phi`, and every complement gap
/// exceeds `2 * length(L_{c,n+1})`.
#[derive(Debug, Clone)]
pub struct ExtensionInstance {
    pub c: OddSequence,
    pub n: usize,
    pub l: FiniteGraph,
    pub b: BTreeSet<Vertex>,
    pub bp: BTreeSet<Vertex>,
    pub phi: PartialHom,
}

#[derive(Debug, Clone, Copy)]
pub struct ExtensionShape {
    pub max_components: usize,
    pub max_runs: usize,
    pub max_run_steps: usize,
    /// Random extra length added to gaps beyond the minimum.
    pub slack: usize,
}

pub fn extension_instance(rng: &mut impl Rng, c: &OddSequence, n: usize, shape: ExtensionShape) -> ExtensionInstance {
    let next_len = c.stage_size(n + 1).expect("stage n+1 exists") as usize;
    let gap = 2 * (next_len - 1) + 1;
    let base = build_stage(c, n).expect("stage n exists");
    let mut edges = Vec::new();
    let mut b = BTreeSet::new();
    let mut phi = PartialHom::new();
    let mut next = 0usize;
    for _ in 0..rng.gen_range(1..=shape.max_components) {
        let start = next;
        let runs = rng.gen_range(0..=shape.max_runs);
        let mut end = start;
        if runs == 0 {
            end += gap + rng.gen_range(0..=shape.slack);
        } else {
            if rng.gen_bool(0.5) {
                end += gap + rng.gen_range(0..=shape.slack);
            }
            for r in 0..runs {
                if r > 0 {
                    end += gap + rng.gen_range(0..=shape.slack);
                }
                let from = rng.gen_range(0..base.vertex_count());
                let steps = rng.gen_range(0..=shape.max_run_steps);
                for v in random_walk(rng, &base, from, steps) {
                    phi.insert(Vertex::label(end as u64), v);
                    b.insert(Vertex::label(end as u64));
                    end += 1;
                }
            }
            if rng.gen_bool(0.5) {
                end += gap + rng.gen_range(0..=shape.slack);
            }
        }
        edges.extend((start + 1..end).map(|i| (i - 1, i)));
        next = end;
    }
    let l = FiniteGraph::from_labels(next, edges, false).expect("paths are simple");
    let bp = l.vertices().iter().copied().collect();
    ExtensionInstance { c: c.clone(), n, l, b, bp, phi }
}
