//! Homomorphisms between finite graphs: checking, exhaustive search, the
//! gap-based extension into the next stage, and the staged pipeline.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use crate::graph::FiniteGraph;
use crate::stage::StageError;
use crate::vertex::Vertex;

mod extend;
mod pipeline;
mod search;

pub use extend::{
    canonical_walk, extend_hom, gap_decomposition, large_gap_layers, GapDecomposition, LayerSequence,
};
pub use pipeline::{check_compatibility, pipeline_hom, CompatReport, Pipeline, PipelineError};
pub use search::{find_hom, Constraints};

/// A finite partial map between vertex sets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialHom {
    map: BTreeMap<Vertex, Vertex>,
}

impl PartialHom {
    pub fn new() -> PartialHom {
        PartialHom::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Vertex, Vertex)>) -> PartialHom {
        PartialHom { map: pairs.into_iter().collect() }
    }

    pub fn get(&self, v: &Vertex) -> Option<Vertex> {
        self.map.get(v).copied()
    }

    pub fn insert(&mut self, from: Vertex, to: Vertex) -> Option<Vertex> {
        self.map.insert(from, to)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vertex, &Vertex)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<Vertex> {
        self.map.keys().copied().collect()
    }

    pub fn image(&self) -> BTreeSet<Vertex> {
        self.map.values().copied().collect()
    }

    pub fn restrict(&self, keep: &BTreeSet<Vertex>) -> PartialHom {
        PartialHom { map: self.map.iter().filter(|(k, _)| keep.contains(k)).map(|(k, v)| (*k, *v)).collect() }
    }

    pub fn as_map(&self) -> &BTreeMap<Vertex, Vertex> {
        &self.map
    }

    /// `{x : phi(x) ∈ c}`.
    pub fn preimage(&self, c: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
        self.map.iter().filter(|(_, v)| c.contains(v)).map(|(k, _)| *k).collect()
    }
}

impl FromIterator<(Vertex, Vertex)> for PartialHom {
    fn from_iter<I: IntoIterator<Item = (Vertex, Vertex)>>(iter: I) -> Self {
        PartialHom::from_pairs(iter)
    }
}

/// Why a map fails to be a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomViolation {
    UnknownSource(Vertex),
    UnknownTarget(Vertex),
    /// A vertex outside the domain where a total map was required.
    Unmapped(Vertex),
    /// `{x, y}` is an edge but `{phi x, phi y}` is not.
    EdgeNotPreserved { x: Vertex, y: Vertex },
    /// The arc `x -> y` is sent to an arc pointing the other way.
    OrientationReversed { x: Vertex, y: Vertex },
}

impl fmt::Display for HomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomViolation::UnknownSource(v) => write!(f, "{v} is not a source vertex"),
            HomViolation::UnknownTarget(v) => write!(f, "{v} is not a target vertex"),
            HomViolation::Unmapped(v) => write!(f, "{v} is not mapped"),
            HomViolation::EdgeNotPreserved { x, y } => write!(f, "edge {{{x}, {y}}} is not preserved"),
            HomViolation::OrientationReversed { x, y } => write!(f, "arc {x} -> {y} is reversed"),
        }
    }
}

impl core::error::Error for HomViolation {}

/// Checks the homomorphism condition on every source edge with both ends in
/// the domain. Orientation is enforced when both graphs are oriented.
pub fn check_hom(source: &FiniteGraph, target: &FiniteGraph, phi: &PartialHom) -> Result<(), HomViolation> {
    for (x, y) in phi.iter() {
        if !source.contains(x) {
            return Err(HomViolation::UnknownSource(*x));
        }
        if !target.contains(y) {
            return Err(HomViolation::UnknownTarget(*y));
        }
    }
    let directed = source.is_oriented() && target.is_oriented();
    for (x, y) in source.edges() {
        let (Some(fx), Some(fy)) = (phi.get(&x), phi.get(&y)) else { continue };
        let (a, b) = (target.index_of(&fx).unwrap(), target.index_of(&fy).unwrap());
        if !target.has_edge(a, b) {
            return Err(HomViolation::EdgeNotPreserved { x, y });
        }
        if directed && !target.has_arc(a, b) {
            return Err(HomViolation::OrientationReversed { x, y });
        }
    }
    Ok(())
}

pub fn is_hom(source: &FiniteGraph, target: &FiniteGraph, phi: &PartialHom) -> bool {
    check_hom(source, target, phi).is_ok()
}

/// Minimal size of a complement component; `Infinite` when the complement is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mgs {
    Size(usize),
    Infinite,
}

impl Mgs {
    /// `self > bound`.
    pub fn exceeds(self, bound: usize) -> bool {
        match self {
            Mgs::Size(s) => s > bound,
            Mgs::Infinite => true,
        }
    }
}

impl fmt::Display for Mgs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mgs::Size(s) => write!(f, "{s}"),
            Mgs::Infinite => f.write_str("inf"),
        }
    }
}

/// Components of `l` restricted to the complement of `b`, as vertex-index lists.
pub fn complement_components(l: &FiniteGraph, b: &BTreeSet<Vertex>) -> Vec<Vec<usize>> {
    let keep: BTreeSet<Vertex> = l.vertices().iter().filter(|v| !b.contains(v)).copied().collect();
    let sub = l.induced(&keep);
    sub.component_members()
        .into_iter()
        .map(|m| m.into_iter().map(|i| l.index_of(&sub.vertex(i)).unwrap()).collect())
        .collect()
}

pub fn mgs(l: &FiniteGraph, b: &BTreeSet<Vertex>) -> Mgs {
    complement_components(l, b).iter().map(|c| Mgs::Size(c.len())).min().unwrap_or(Mgs::Infinite)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HomError {
    Stage(StageError),
    /// The source graph is not a disjoint union of paths.
    NotPathForest,
    /// `vertex` belongs to a set that should contain it.
    NotSubset { vertex: Vertex, of: &'static str },
    /// The Bp-component containing `vertex` is not a path.
    ComponentNotPath(Vertex),
    DomainMismatch(Vertex),
    NotHom(HomViolation),
    GapTooSmall { mgs: Mgs, bound: usize },
    WalkInfeasible { from: Vertex, to: Vertex, dist: usize, steps: usize },
    Unreachable { from: Vertex, to: Vertex },
    UnknownVertex(Vertex),
}

impl fmt::Display for HomError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomError::Stage(e) => write!(f, "{e}"),
            HomError::NotPathForest => f.write_str("source is not a disjoint union of paths"),
            HomError::NotSubset { vertex, of } => write!(f, "{vertex} is not in {of}"),
            HomError::ComponentNotPath(v) => write!(f, "component of {v} in the extension domain is not a path"),
            HomError::DomainMismatch(v) => write!(f, "map domain differs from the base set at {v}"),
            HomError::NotHom(e) => write!(f, "map is not a homomorphism: {e}"),
            HomError::GapTooSmall { mgs, bound } => {
                write!(f, "minimal gap size {mgs} does not exceed {bound}")
            }
            HomError::WalkInfeasible { from, to, dist, steps } => write!(
                f,
                "no walk of {steps} steps from {from} to {to} (distance {dist})"
            ),
            HomError::Unreachable { from, to } => write!(f, "{to} is unreachable from {from}"),
            HomError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
        }
    }
}

impl core::error::Error for HomError {}

impl From<StageError> for HomError {
    fn from(e: StageError) -> Self {
        HomError::Stage(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stage::{build_stage, levels_below};

    fn l(i: u64) -> Vertex {
        Vertex::label(i)
    }

    #[test]
    fn hom_checks() {
        let p3 = FiniteGraph::from_labels(4, [(0, 1), (1, 2), (2, 3)], false).unwrap();
        let edge = FiniteGraph::from_labels(2, [(0, 1)], false).unwrap();
        let id: PartialHom = (0..4).map(|i| (l(i), l(i))).collect();
        assert!(is_hom(&p3, &p3, &id));
        let constant: PartialHom = (0..4).map(|i| (l(i), l(0))).collect();
        assert!(!is_hom(&p3, &edge, &constant));
        let fold: PartialHom = (0..4).map(|i| (l(i), l(i % 2))).collect();
        assert!(is_hom(&p3, &edge, &fold));
    }

    #[test]
    fn orientation_is_respected() {
        let a = FiniteGraph::from_labels(2, [(0, 1)], true).unwrap();
        let b = FiniteGraph::from_labels(2, [(1, 0)], true).unwrap();
        let id: PartialHom = (0..2).map(|i| (l(i), l(i))).collect();
        assert_eq!(
            check_hom(&a, &b, &id),
            Err(HomViolation::OrientationReversed { x: l(0), y: l(1) })
        );
        assert!(is_hom(&a, &a.symmetrized(), &id));
    }

    #[test]
    fn mgs_examples() {
        let g = build_stage(&"1,1,3".parse().unwrap(), 2).unwrap();
        assert_eq!(mgs(&g, &BTreeSet::new()), Mgs::Size(g.vertex_count()));
        assert_eq!(mgs(&g, &levels_below(&g, 1)), Mgs::Size(2));
        assert_eq!(mgs(&g, &levels_below(&g, 2)), Mgs::Size(4));
        assert_eq!(mgs(&g, &g.vertices().iter().copied().collect()), Mgs::Infinite);
        assert!(Mgs::Infinite > Mgs::Size(usize::MAX));
    }
}
