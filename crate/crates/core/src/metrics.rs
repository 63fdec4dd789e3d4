//! Walks, distances and directed distances.
//!
//! On an oriented forest every walk between two vertices has the same signed
//! length, so [`DidistIndex`] stores one potential per vertex (signed length
//! from its component root) and answers `didist(x, y) = pot(y) - pot(x)`.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::FiniteGraph;
use crate::params::DirectionWord;
use crate::vertex::Vertex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricError {
    UnknownVertex(Vertex),
    /// Directed distances need a graph whose symmetrization has no cycle.
    Cyclic,
    NotOriented,
    /// Step `index` of a walk is not an edge in the recorded direction.
    InvalidStep { index: usize, from: Vertex, to: Vertex },
    /// Direction word and vertex sequence lengths disagree.
    ShapeMismatch { vertices: usize, directions: usize },
}

impl fmt::Display for MetricError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            MetricError::Cyclic => f.write_str("graph has an undirected cycle; didist is undefined"),
            MetricError::NotOriented => f.write_str("graph carries no orientation"),
            MetricError::InvalidStep { index, from, to } => {
                write!(f, "step {index} ({from} -> {to}) is not an edge in the recorded direction")
            }
            MetricError::ShapeMismatch { vertices, directions } => write!(
                f,
                "walk has {vertices} vertices but {directions} directions"
            ),
        }
    }
}

impl core::error::Error for MetricError {}

pub fn sigma(d: &DirectionWord) -> i64 {
    d.sigma()
}

/// A walk `((x_0, .., x_l), d_p)`. Vertices may repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Walk {
    pub vertices: Vec<Vertex>,
    pub directions: Vec<i8>,
}

impl Walk {
    pub fn trivial(v: Vertex) -> Walk {
        Walk { vertices: vec![v], directions: Vec::new() }
    }

    /// Follows `vertices` through `g`, recording each step's direction
    /// against the orientation (`+1` throughout when `g` is unoriented).
    pub fn trace(g: &FiniteGraph, vertices: Vec<Vertex>) -> Result<Walk, MetricError> {
        let idx = vertices
            .iter()
            .map(|v| g.index_of(v).ok_or(MetricError::UnknownVertex(*v)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut directions = Vec::with_capacity(idx.len().saturating_sub(1));
        for (i, w) in idx.windows(2).enumerate() {
            let s = g.step_sign(w[0], w[1]).ok_or(MetricError::InvalidStep {
                index: i,
                from: vertices[i],
                to: vertices[i + 1],
            })?;
            directions.push(if g.is_oriented() { s } else { 1 });
        }
        Ok(Walk { vertices, directions })
    }

    /// Checks that step `i` is `(x_i, x_{i+1})^{d_p(i)}` in `g`.
    pub fn validate(&self, g: &FiniteGraph) -> Result<(), MetricError> {
        if self.vertices.is_empty() || self.directions.len() + 1 != self.vertices.len() {
            return Err(MetricError::ShapeMismatch {
                vertices: self.vertices.len(),
                directions: self.directions.len(),
            });
        }
        for (i, (w, &d)) in self.vertices.windows(2).zip(&self.directions).enumerate() {
            let a = g.index_of(&w[0]).ok_or(MetricError::UnknownVertex(w[0]))?;
            let b = g.index_of(&w[1]).ok_or(MetricError::UnknownVertex(w[1]))?;
            let ok = match d {
                1 => g.has_arc(a, b),
                -1 => g.has_arc(b, a),
                _ => false,
            };
            if !ok {
                return Err(MetricError::InvalidStep { index: i, from: w[0], to: w[1] });
            }
        }
        Ok(())
    }

    pub fn first(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn last(&self) -> Vertex {
        self.vertices[self.vertices.len() - 1]
    }

    /// `ℓ`, the number of steps.
    pub fn length(&self) -> usize {
        self.directions.len()
    }

    /// `Σ(d_p)`.
    pub fn dilength(&self) -> i64 {
        self.directions.iter().map(|&d| i64::from(d)).sum()
    }

    /// No repeated vertex.
    pub fn is_path(&self) -> bool {
        let set: BTreeSet<&Vertex> = self.vertices.iter().collect();
        set.len() == self.vertices.len()
    }
}

/// Validates `w` in `g` and returns its dilength.
pub fn walk_dilength(g: &FiniteGraph, w: &Walk) -> Result<i64, MetricError> {
    w.validate(g)?;
    Ok(w.dilength())
}

fn index(g: &FiniteGraph, v: &Vertex) -> Result<usize, MetricError> {
    g.index_of(v).ok_or(MetricError::UnknownVertex(*v))
}

/// Shortest-path edge count; `None` across components.
pub fn dist(g: &FiniteGraph, x: &Vertex, y: &Vertex) -> Result<Option<usize>, MetricError> {
    let (a, b) = (index(g, x)?, index(g, y)?);
    Ok(g.bfs(a)[b])
}

/// Per-vertex signed potentials of an oriented forest.
#[derive(Debug, Clone)]
pub struct DidistIndex {
    component: Vec<usize>,
    potential: Vec<i64>,
}

impl DidistIndex {
    pub fn new(g: &FiniteGraph) -> Result<DidistIndex, MetricError> {
        if !g.is_oriented() {
            return Err(MetricError::NotOriented);
        }
        if !g.is_acyclic() {
            return Err(MetricError::Cyclic);
        }
        let n = g.vertex_count();
        let (component, _) = g.components();
        let mut potential = vec![0i64; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            queue.push_back(root);
            while let Some(u) = queue.pop_front() {
                for w in g.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        let s = if g.has_arc(u, w) { 1 } else { -1 };
                        potential[w] = potential[u] + s;
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(DidistIndex { component, potential })
    }

    /// `didist` by vertex index.
    pub fn get(&self, a: usize, b: usize) -> Option<i64> {
        (self.component[a] == self.component[b]).then(|| self.potential[b] - self.potential[a])
    }

    pub fn component(&self, a: usize) -> usize {
        self.component[a]
    }

    pub fn potential(&self, a: usize) -> i64 {
        self.potential[a]
    }
}

/// The common dilength of all walks from `x` to `y`; `None` across components.
pub fn didist(g: &FiniteGraph, x: &Vertex, y: &Vertex) -> Result<Option<i64>, MetricError> {
    let (a, b) = (index(g, x)?, index(g, y)?);
    Ok(DidistIndex::new(g)?.get(a, b))
}

/// `D(B)`: every didistance realized by an ordered pair in `B` within one component.
pub fn didistance_set(g: &FiniteGraph, b: &BTreeSet<Vertex>) -> Result<BTreeSet<i64>, MetricError> {
    let idx = DidistIndex::new(g)?;
    didistance_set_with(&idx, g, b)
}

/// [`didistance_set`] reusing a prebuilt index.
pub fn didistance_set_with(
    idx: &DidistIndex,
    g: &FiniteGraph,
    b: &BTreeSet<Vertex>,
) -> Result<BTreeSet<i64>, MetricError> {
    let mut by_component: BTreeMap<usize, BTreeSet<i64>> = BTreeMap::new();
    for v in b {
        let i = index(g, v)?;
        by_component.entry(idx.component(i)).or_default().insert(idx.potential(i));
    }
    let mut out = BTreeSet::new();
    for pots in by_component.values() {
        for &p in pots {
            for &q in pots {
                out.insert(q - p);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentInfo {
    pub size: usize,
    pub edges: usize,
    pub is_tree: bool,
    pub is_path: bool,
    pub min_vertex: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub oriented: bool,
    pub components: Vec<ComponentInfo>,
    /// degree -> number of vertices
    pub degrees: BTreeMap<usize, usize>,
    pub acyclic: bool,
}

impl StructureReport {
    pub fn is_forest(&self) -> bool {
        self.acyclic
    }

    pub fn is_path(&self) -> bool {
        self.components.len() == 1 && self.components[0].is_path
    }
}

pub fn structure(g: &FiniteGraph) -> StructureReport {
    let (comp, count) = g.components();
    let mut sizes = vec![0usize; count];
    let mut edges = vec![0usize; count];
    let mut max_deg = vec![0usize; count];
    let mut min_vertex: Vec<Option<Vertex>> = vec![None; count];
    let mut degrees = BTreeMap::new();
    for (i, &c) in comp.iter().enumerate() {
        sizes[c] += 1;
        max_deg[c] = max_deg[c].max(g.degree(i));
        *degrees.entry(g.degree(i)).or_insert(0) += 1;
        let v = g.vertex(i);
        if min_vertex[c].is_none_or(|m| v < m) {
            min_vertex[c] = Some(v);
        }
    }
    for &(a, _) in g.edge_indices() {
        edges[comp[a]] += 1;
    }
    let components = (0..count)
        .map(|c| {
            let is_tree = edges[c] + 1 == sizes[c];
            ComponentInfo {
                size: sizes[c],
                edges: edges[c],
                is_tree,
                is_path: is_tree && max_deg[c] <= 2,
                min_vertex: min_vertex[c].expect("components are nonempty"),
            }
        })
        .collect();
    StructureReport {
        vertex_count: g.vertex_count(),
        edge_count: g.edge_count(),
        oriented: g.is_oriented(),
        components,
        degrees,
        acyclic: g.is_acyclic(),
    }
}
