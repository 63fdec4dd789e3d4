use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{check_hom, complement_components, mgs, HomError, Mgs, PartialHom};
use crate::graph::FiniteGraph;
use crate::metrics::Walk;
use crate::params::OddSequence;
use crate::stage::{build_stage, stage_path, zero_vertex};
use crate::vertex::Vertex;

/// A component of `L|Bp` read from its smaller endpoint, with the index
/// ranges of its `L|B` runs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapDecomposition {
    pub order: Vec<Vertex>,
    /// `i_0 <= i_1 < i_2 <= i_3 < ..`: run `j` covers `order[i_{2j} ..= i_{2j+1}]`.
    /// Empty when the component misses `B`.
    pub cuts: Vec<usize>,
}

impl GapDecomposition {
    pub fn runs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.cuts.chunks(2).map(|c| (c[0], c[1]))
    }

    /// The component meets no vertex of `B`.
    pub fn is_free(&self) -> bool {
        self.cuts.is_empty()
    }
}

fn is_path_forest(g: &FiniteGraph) -> bool {
    g.is_acyclic() && (0..g.vertex_count()).all(|i| g.degree(i) <= 2)
}

fn check_subset(inner: &BTreeSet<Vertex>, outer: impl Fn(&Vertex) -> bool, of: &'static str) -> Result<(), HomError> {
    match inner.iter().find(|v| !outer(v)) {
        Some(v) => Err(HomError::NotSubset { vertex: *v, of }),
        None => Ok(()),
    }
}

/// Splits each component of `L|Bp` into `B`-runs and gaps. Components are
/// enumerated from the endpoint that comes first in `l`'s vertex order.
pub fn gap_decomposition(
    l: &FiniteGraph,
    b: &BTreeSet<Vertex>,
    bp: &BTreeSet<Vertex>,
) -> Result<Vec<GapDecomposition>, HomError> {
    check_subset(bp, |v| l.contains(v), "the source graph")?;
    check_subset(b, |v| bp.contains(v), "the extension domain")?;
    let sub = l.induced(bp);
    let mut out = Vec::new();
    for members in sub.component_members() {
        let edges: usize = members.iter().map(|&i| sub.degree(i)).sum::<usize>() / 2;
        if edges + 1 != members.len() || members.iter().any(|&i| sub.degree(i) > 2) {
            return Err(HomError::ComponentNotPath(sub.vertex(members[0])));
        }
        let start = *members.iter().find(|&&i| sub.degree(i) <= 1).expect("a finite path has an endpoint");
        let mut order = Vec::with_capacity(members.len());
        let (mut prev, mut cur) = (usize::MAX, start);
        loop {
            order.push(sub.vertex(cur));
            match sub.neighbors(cur).find(|&w| w != prev) {
                Some(next) => (prev, cur) = (cur, next),
                None => break,
            }
        }
        let mut cuts = Vec::new();
        let mut i = 0;
        while i < order.len() {
            if b.contains(&order[i]) {
                let s = i;
                while i + 1 < order.len() && b.contains(&order[i + 1]) {
                    i += 1;
                }
                cuts.push(s);
                cuts.push(i);
            }
            i += 1;
        }
        out.push(GapDecomposition { order, cuts });
    }
    Ok(out)
}

/// A walk of exactly `steps` edges from `a` to `b`: a shortest path, then
/// back and forth across the last edge into `b` (or `b`'s least neighbor
/// when `a = b`).
pub fn canonical_walk(target: &FiniteGraph, a: &Vertex, b: &Vertex, steps: usize) -> Result<Walk, HomError> {
    let ai = target.index_of(a).ok_or(HomError::UnknownVertex(*a))?;
    let bi = target.index_of(b).ok_or(HomError::UnknownVertex(*b))?;
    let path = target.shortest_path(ai, bi).ok_or(HomError::Unreachable { from: *a, to: *b })?;
    let dist = path.len() - 1;
    let infeasible = HomError::WalkInfeasible { from: *a, to: *b, dist, steps };
    if steps < dist || !(steps - dist).is_multiple_of(2) {
        return Err(infeasible);
    }
    let mut vertices: Vec<Vertex> = path.iter().map(|&i| target.vertex(i)).collect();
    let extra = steps - dist;
    if extra > 0 {
        let pivot = if dist > 0 {
            path[dist - 1]
        } else {
            target.neighbors(bi).min().ok_or(infeasible)?
        };
        for _ in 0..extra / 2 {
            vertices.push(target.vertex(pivot));
            vertices.push(*b);
        }
    }
    Walk::trace(target, vertices).map_err(|_| HomError::Unreachable { from: *a, to: *b })
}

/// `len + 1` vertices alternating between `a` and its least neighbor.
fn oscillate(target: &FiniteGraph, a: &Vertex, len: usize) -> Result<Vec<Vertex>, HomError> {
    let ai = target.index_of(a).ok_or(HomError::UnknownVertex(*a))?;
    if len == 0 {
        return Ok(alloc::vec![*a]);
    }
    let n = target
        .neighbors(ai)
        .min()
        .map(|i| target.vertex(i))
        .ok_or(HomError::WalkInfeasible { from: *a, to: *a, dist: 0, steps: len })?;
    Ok((0..=len).map(|j| if j % 2 == 0 { *a } else { n }).collect())
}

/// Extends `phi: L|B -> L_{c,n}` to `phi': L|Bp -> L_{c,n+1}` with
/// `π ∘ phi' = phi` on `B`, provided the complement gaps of `B` are longer
/// than twice the length of the stage-`(n+1)` path.
///
/// Each component is handled on its own: `B`-runs are lifted into copy 0 or
/// copy 1 of the next stage, switching copies across a gap exactly when the
/// gap length and the distance between the run ends disagree in parity, and
/// gaps are filled with [`canonical_walk`].
pub fn extend_hom(
    l: &FiniteGraph,
    b: &BTreeSet<Vertex>,
    bp: &BTreeSet<Vertex>,
    phi: &PartialHom,
    c: &OddSequence,
    n: usize,
) -> Result<PartialHom, HomError> {
    extend_with_gap(l, b, bp, phi, c, n, None)
}

/// [`extend_hom`] with an optional externally supplied gap size for `B`.
pub(super) fn extend_with_gap(
    l: &FiniteGraph,
    b: &BTreeSet<Vertex>,
    bp: &BTreeSet<Vertex>,
    phi: &PartialHom,
    c: &OddSequence,
    n: usize,
    gap: Option<Mgs>,
) -> Result<PartialHom, HomError> {
    let lower = stage_path(c, n)?;
    let upper = stage_path(c, n + 1)?;
    let target = build_stage(c, n + 1)?;
    let base = build_stage(c, n)?;
    if !is_path_forest(l) {
        return Err(HomError::NotPathForest);
    }
    check_subset(bp, |v| l.contains(v), "the source graph")?;
    check_subset(b, |v| bp.contains(v), "the extension domain")?;
    if let Some(v) = b.iter().find(|v| phi.get(v).is_none()) {
        return Err(HomError::DomainMismatch(*v));
    }
    if let Some(v) = phi.domain().into_iter().find(|v| !b.contains(v)) {
        return Err(HomError::DomainMismatch(v));
    }
    check_hom(l, &base, phi).map_err(HomError::NotHom)?;
    let decomps = gap_decomposition(l, b, bp)?;
    let bound = 2 * upper.length();
    let gap = gap.unwrap_or_else(|| mgs(l, b));
    if !gap.exceeds(bound) {
        return Err(HomError::GapTooSmall { mgs: gap, bound });
    }

    let mut out = PartialHom::new();
    for d in &decomps {
        if d.is_free() {
            let start = zero_vertex(n + 1);
            for (v, img) in d.order.iter().zip(oscillate(&target, &start, d.order.len() - 1)?) {
                out.insert(*v, img);
            }
            continue;
        }
        let lift = |v: &Vertex, bit: u8| phi.get(v).unwrap().extend(bit);
        let mut bit = 0u8;
        let runs: Vec<(usize, usize)> = d.runs().collect();
        for (j, &(s, e)) in runs.iter().enumerate() {
            for v in &d.order[s..=e] {
                out.insert(*v, lift(v, bit));
            }
            if let Some(&(s2, _)) = runs.get(j + 1) {
                let (x, y) = (phi.get(&d.order[e]).unwrap(), phi.get(&d.order[s2]).unwrap());
                let dist = lower.dist(&x, &y).expect("phi lands in the stage");
                let next_bit = if dist % 2 == (s2 - e) % 2 { bit } else { 1 - bit };
                let walk = canonical_walk(&target, &lift(&d.order[e], bit), &lift(&d.order[s2], next_bit), s2 - e)?;
                for (v, img) in d.order[e..=s2].iter().zip(&walk.vertices) {
                    out.insert(*v, *img);
                }
                bit = next_bit;
            }
        }
        let (first, _) = runs[0];
        let lead = oscillate(&target, &out.get(&d.order[first]).unwrap(), first)?;
        for (v, img) in d.order[..first].iter().rev().zip(lead.iter().skip(1)) {
            out.insert(*v, *img);
        }
        let (_, last) = runs[runs.len() - 1];
        let trail = oscillate(&target, &out.get(&d.order[last]).unwrap(), d.order.len() - 1 - last)?;
        for (v, img) in d.order[last + 1..].iter().zip(trail.iter().skip(1)) {
            out.insert(*v, *img);
        }
    }
    Ok(out)
}

/// `B_0 ⊆ B_1 ⊆ ..`: `B_k` adds to `B` every interior complement component
/// with fewer than `k` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerSequence {
    pub layers: Vec<BTreeSet<Vertex>>,
    pub gap_sizes: Vec<Mgs>,
    /// Complement components touching an end of the finite graph; never added.
    pub boundary: Vec<BTreeSet<Vertex>>,
}

pub fn large_gap_layers(l: &FiniteGraph, b: &BTreeSet<Vertex>, horizon: usize) -> LayerSequence {
    let comps = complement_components(l, b);
    let (boundary, interior): (Vec<_>, Vec<_>) =
        comps.into_iter().partition(|c| c.iter().any(|&i| l.degree(i) < 2));
    let mut layers = Vec::with_capacity(horizon + 1);
    let mut gap_sizes = Vec::with_capacity(horizon + 1);
    for k in 0..=horizon {
        let mut layer = b.clone();
        for comp in interior.iter().filter(|c| c.len() < k) {
            layer.extend(comp.iter().map(|&i| l.vertex(i)));
        }
        gap_sizes.push(mgs(l, &layer));
        layers.push(layer);
    }
    let boundary = boundary.into_iter().map(|c| c.into_iter().map(|i| l.vertex(i)).collect()).collect();
    LayerSequence { layers, gap_sizes, boundary }
}
