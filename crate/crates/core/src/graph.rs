//! Finite graphs with an optional orientation.
//!
//! Vertex indices follow the order in which vertices were supplied; stage
//! graphs supply them in canonical order, so index order doubles as the
//! linear order used for tie-breaking everywhere in the crate.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::params::OddSequence;
use crate::vertex::Vertex;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    DuplicateVertex(Vertex),
    UnknownVertex(Vertex),
    Loop(Vertex),
    DuplicateEdge(Vertex, Vertex),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::DuplicateVertex(v) => write!(f, "vertex {v} listed twice"),
            GraphError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            GraphError::Loop(v) => write!(f, "loop at {v}: edges must be irreflexive"),
            GraphError::DuplicateEdge(u, v) => write!(f, "edge {{{u}, {v}}} listed twice"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Which stage graph a [`FiniteGraph`] is, when it is one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageMeta {
    pub c: OddSequence,
    pub stage: usize,
}

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGraph {
    vertices: Vec<Vertex>,
    index: BTreeMap<Vertex, usize>,
    /// `(from, to)` for oriented graphs, `(min, max)` otherwise.
    edges: Vec<(usize, usize)>,
    /// `(neighbor, edge id)` per vertex.
    adj: Vec<Vec<(usize, usize)>>,
    oriented: bool,
    meta: Option<StageMeta>,
}

impl FiniteGraph {
    /// Builds a graph; for oriented graphs each pair is read as `from -> to`.
    pub fn new(
        vertices: Vec<Vertex>,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
        oriented: bool,
    ) -> Result<Self, GraphError> {
        let mut index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(*v, i).is_some() {
                return Err(GraphError::DuplicateVertex(*v));
            }
        }
        let mut g = FiniteGraph {
            adj: vec![Vec::new(); vertices.len()],
            vertices,
            index,
            edges: Vec::new(),
            oriented,
            meta: None,
        };
        for (u, v) in edges {
            let a = g.require(&u)?;
            let b = g.require(&v)?;
            g.push_edge(a, b)?;
        }
        Ok(g)
    }

    /// Abstract graph on labels `0..n`.
    pub fn from_labels(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
        oriented: bool,
    ) -> Result<Self, GraphError> {
        let vertices = (0..n as u64).map(Vertex::label).collect();
        FiniteGraph::new(
            vertices,
            edges
                .into_iter()
                .map(|(a, b)| (Vertex::label(a as u64), Vertex::label(b as u64))),
            oriented,
        )
    }

    pub(crate) fn from_index_edges(
        vertices: Vec<Vertex>,
        edges: impl IntoIterator<Item = (usize, usize)>,
        oriented: bool,
    ) -> Result<Self, GraphError> {
        let mut g = FiniteGraph::new(vertices, core::iter::empty(), oriented)?;
        for (a, b) in edges {
            g.push_edge(a, b)?;
        }
        Ok(g)
    }

    fn require(&self, v: &Vertex) -> Result<usize, GraphError> {
        self.index.get(v).copied().ok_or(GraphError::UnknownVertex(*v))
    }

    fn push_edge(&mut self, a: usize, b: usize) -> Result<(), GraphError> {
        if a == b {
            return Err(GraphError::Loop(self.vertices[a]));
        }
        if self.edge_id(a, b).is_some() {
            return Err(GraphError::DuplicateEdge(self.vertices[a], self.vertices[b]));
        }
        let id = self.edges.len();
        self.edges.push(if self.oriented { (a, b) } else { (a.min(b), a.max(b)) });
        self.adj[a].push((b, id));
        self.adj[b].push((a, id));
        Ok(())
    }

    pub fn with_meta(mut self, meta: StageMeta) -> Self {
        self.meta = Some(meta);
        self
    }

    pub fn meta(&self) -> Option<&StageMeta> {
        self.meta.as_ref()
    }

    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Vertex {
        self.vertices[i]
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    /// Edges by index: `(from, to)` when oriented, `(min, max)` otherwise.
    pub fn edge_indices(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().map(|&(a, b)| (self.vertices[a], self.vertices[b]))
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[i].iter().map(|&(n, _)| n)
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.adj[a].iter().find(|&&(n, _)| n == b).map(|&(_, id)| id)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_id(a, b).is_some()
    }

    pub fn has_arc(&self, from: usize, to: usize) -> bool {
        match self.edge_id(from, to) {
            Some(id) if self.oriented => self.edges[id] == (from, to),
            Some(_) => true,
            None => false,
        }
    }

    /// Direction of traversing the edge `a -- b` from `a` to `b`, measured
    /// against the stored pair: `+1` when it agrees, `-1` otherwise.
    pub fn step_sign(&self, a: usize, b: usize) -> Option<i8> {
        self.edge_id(a, b).map(|id| if self.edges[id] == (a, b) { 1 } else { -1 })
    }

    /// The underlying undirected graph, `G ∪ G⁻¹`.
    pub fn symmetrized(&self) -> FiniteGraph {
        let mut g = FiniteGraph::from_index_edges(self.vertices.clone(), self.edges.iter().copied(), false)
            .expect("edges of a valid graph stay valid");
        g.meta = self.meta.clone();
        g
    }

    /// The same graph with every arc reversed, `G⁻¹`.
    pub fn reversed(&self) -> FiniteGraph {
        let mut g = FiniteGraph::from_index_edges(
            self.vertices.clone(),
            self.edges.iter().map(|&(a, b)| (b, a)),
            self.oriented,
        )
        .expect("edges of a valid graph stay valid");
        g.meta = self.meta.clone();
        g
    }

    /// Undirected edge set as ordered vertex pairs.
    pub fn edge_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (u, v) = (self.vertices[a], self.vertices[b]);
                if u <= v { (u, v) } else { (v, u) }
            })
            .collect()
    }

    /// Arc set; for unoriented graphs both directions of every edge.
    pub fn arc_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        let mut out = BTreeSet::new();
        for &(a, b) in &self.edges {
            out.insert((self.vertices[a], self.vertices[b]));
            if !self.oriented {
                out.insert((self.vertices[b], self.vertices[a]));
            }
        }
        out
    }

    /// The graph induced on `keep`, preserving vertex order and orientation.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> FiniteGraph {
        let kept: Vec<Vertex> = self.vertices.iter().copied().filter(|v| keep.contains(v)).collect();
        let edges: Vec<(Vertex, Vertex)> = self
            .edges()
            .filter(|(u, v)| keep.contains(u) && keep.contains(v))
            .collect();
        let mut g = FiniteGraph::new(kept, edges, self.oriented).expect("induced subgraph is valid");
        g.meta = self.meta.clone();
        g
    }

    /// The graph with the edge `{u, v}` removed.
    pub fn without_edge(&self, u: &Vertex, v: &Vertex) -> Result<FiniteGraph, GraphError> {
        let a = self.require(u)?;
        let b = self.require(v)?;
        let id = self.edge_id(a, b).ok_or(GraphError::UnknownVertex(*v))?;
        let mut g = FiniteGraph::from_index_edges(
            self.vertices.clone(),
            self.edges.iter().enumerate().filter(|(i, _)| *i != id).map(|(_, e)| *e),
            self.oriented,
        )?;
        g.meta = self.meta.clone();
        Ok(g)
    }

    /// A copy carrying the given orientation; every edge must be covered exactly once.
    pub fn oriented_by(&self, arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<FiniteGraph, GraphError> {
        let arcs: Vec<(Vertex, Vertex)> = arcs.into_iter().collect();
        let mut seen = BTreeSet::new();
        for (u, v) in &arcs {
            let a = self.require(u)?;
            let b = self.require(v)?;
            let id = self.edge_id(a, b).ok_or(GraphError::UnknownVertex(*v))?;
            if !seen.insert(id) {
                return Err(GraphError::DuplicateEdge(*u, *v));
            }
        }
        if seen.len() != self.edges.len() {
            let (a, b) = self
                .edges
                .iter()
                .enumerate()
                .find(|(i, _)| !seen.contains(i))
                .map(|(_, e)| *e)
                .expect("some edge is missing");
            return Err(GraphError::UnknownVertex(if a < b { self.vertices[a] } else { self.vertices[b] }));
        }
        let mut g = FiniteGraph::new(self.vertices.clone(), arcs, true)?;
        g.meta = self.meta.clone();
        Ok(g)
    }

    /// Component id per vertex (numbered by smallest member) and the component count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.vertices.len()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.vertices.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for w in self.neighbors(u) {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    /// Members of each component, in vertex order.
    pub fn component_members(&self) -> Vec<Vec<usize>> {
        let (comp, count) = self.components();
        let mut out = vec![Vec::new(); count];
        for (i, &c) in comp.iter().enumerate() {
            out[c].push(i);
        }
        out
    }

    /// No undirected cycles.
    pub fn is_acyclic(&self) -> bool {
        let (_, count) = self.components();
        self.edges.len() + count == self.vertices.len()
    }

    /// BFS distances from `src` (undirected sense).
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertices.len()];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS parents from `src`; `parent[src] = Some(src)`.
    pub fn bfs_parents(&self, src: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.vertices.len()];
        parent[src] = Some(src);
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if parent[w].is_none() {
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// A shortest path `from .. to` as vertex indices, if connected.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let parent = self.bfs_parents(to);
        parent[from]?;
        let mut path = vec![from];
        let mut cur = from;
        while cur != to {
            cur = parent[cur].unwrap();
            path.push(cur);
        }
        Some(path)
    }
}

impl fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGraph")
            .field("vertices", &self.vertices.len())
            .field("edges", &self.edges.len())
            .field("oriented", &self.oriented)
            .field("meta", &self.meta)
            .finish()
    }
}
