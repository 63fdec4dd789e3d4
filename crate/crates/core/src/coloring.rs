//! Proper two-colorings: a bipartiteness oracle, the parity coloring of an
//! evenly separated set, the peeling recursion for sets whose odd
//! separations have bounded directed length, and the coloring of components
//! that a homomorphism fails to cover.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::FiniteGraph;
use crate::hom::{check_hom, HomViolation, PartialHom};
use crate::metrics::{DidistIndex, MetricError};
use crate::vertex::Vertex;

/// A partial vertex coloring.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coloring {
    pub colors: BTreeMap<Vertex, u8>,
}

impl Coloring {
    pub fn get(&self, v: &Vertex) -> Option<u8> {
        self.colors.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn domain(&self) -> BTreeSet<Vertex> {
        self.colors.keys().copied().collect()
    }

    /// First monochromatic edge with both ends colored, if any.
    pub fn violation(&self, g: &FiniteGraph) -> Option<(Vertex, Vertex)> {
        g.edges().find(|(u, v)| match (self.get(u), self.get(v)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        })
    }

    pub fn is_proper(&self, g: &FiniteGraph) -> bool {
        self.violation(g).is_none()
    }

    fn absorb(&mut self, other: Coloring) {
        self.colors.extend(other.colors);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColorError {
    UnknownVertex(Vertex),
    Metric(MetricError),
    /// An input that should be a disjoint union of paths is not.
    NotPathForest,
    NotHom(HomViolation),
    /// A parity step that the recursion guarantees failed anyway.
    ParityFailed(OddWalk),
}

impl fmt::Display for ColorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorError::UnknownVertex(v) => write!(f, "unknown vertex {v}"),
            ColorError::Metric(e) => write!(f, "{e}"),
            ColorError::NotPathForest => f.write_str("graph is not a disjoint union of paths"),
            ColorError::NotHom(e) => write!(f, "map is not a homomorphism: {e}"),
            ColorError::ParityFailed(w) => write!(f, "parity coloring failed between {} and {}", w.from, w.to),
        }
    }
}

impl core::error::Error for ColorError {}

impl From<MetricError> for ColorError {
    fn from(e: MetricError) -> Self {
        ColorError::Metric(e)
    }
}

/// An odd cycle, listed without repeating its first vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddCycle(pub Vec<Vertex>);

/// Two vertices of the input set joined by a walk of odd length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddWalk {
    pub from: Vertex,
    pub to: Vertex,
    pub walk: Vec<Vertex>,
}

struct Bfs {
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl Bfs {
    fn new(n: usize) -> Bfs {
        Bfs { parent: vec![usize::MAX; n], depth: vec![0; n] }
    }

    fn seen(&self, i: usize) -> bool {
        self.parent[i] != usize::MAX
    }

    /// Explores the component of `root`; returns its members and the first
    /// edge joining two vertices of equal depth parity.
    fn explore(&mut self, g: &FiniteGraph, root: usize) -> (Vec<usize>, Option<(usize, usize)>) {
        self.parent[root] = root;
        self.depth[root] = 0;
        let mut members = vec![root];
        let mut conflict = None;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if !self.seen(w) {
                    self.parent[w] = u;
                    self.depth[w] = self.depth[u] + 1;
                    members.push(w);
                    queue.push_back(w);
                } else if conflict.is_none() && self.depth[w] % 2 == self.depth[u] % 2 {
                    conflict = Some((u, w));
                }
            }
        }
        (members, conflict)
    }

    /// Tree path from `i` up to the root.
    fn to_root(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![i];
        while self.parent[i] != i {
            i = self.parent[i];
            out.push(i);
        }
        out
    }

    /// The odd cycle closed by the conflict edge `u -- w`: `u .. lca .. w`.
    fn cycle(&self, u: usize, w: usize) -> Vec<usize> {
        let up = self.to_root(u);
        let wp = self.to_root(w);
        let on_w: BTreeSet<usize> = wp.iter().copied().collect();
        let lca_pos = up.iter().position(|x| on_w.contains(x)).expect("same tree");
        let lca = up[lca_pos];
        let mut cycle: Vec<usize> = up[..=lca_pos].to_vec();
        let w_pos = wp.iter().position(|&x| x == lca).unwrap();
        cycle.extend(wp[..w_pos].iter().rev());
        cycle
    }
}

fn vertices(g: &FiniteGraph, idx: impl IntoIterator<Item = usize>) -> Vec<Vertex> {
    idx.into_iter().map(|i| g.vertex(i)).collect()
}

/// Proper two-coloring of every component, or an odd cycle.
pub fn two_color(g: &FiniteGraph) -> Result<Coloring, OddCycle> {
    let mut bfs = Bfs::new(g.vertex_count());
    let mut out = Coloring::default();
    for root in 0..g.vertex_count() {
        if bfs.seen(root) {
            continue;
        }
        let (members, conflict) = bfs.explore(g, root);
        if let Some((u, w)) = conflict {
            return Err(OddCycle(vertices(g, bfs.cycle(u, w))));
        }
        for i in members {
            out.colors.insert(g.vertex(i), (bfs.depth[i] % 2) as u8);
        }
    }
    Ok(out)
}

fn require_all(g: &FiniteGraph, a: &BTreeSet<Vertex>) -> Result<Vec<usize>, ColorError> {
    let mut idx = a
        .iter()
        .map(|v| g.index_of(v).ok_or(ColorError::UnknownVertex(*v)))
        .collect::<Result<Vec<_>, _>>()?;
    idx.sort_unstable();
    Ok(idx)
}

/// Colors the saturation `[A]` by the parity of the distance to `A`,
/// provided every walk between members of `A` has even length.
///
/// On failure returns two members of `A` and an odd walk between them; a
/// component with an odd cycle yields a closed odd walk.
pub fn parity_two_color(g: &FiniteGraph, a: &BTreeSet<Vertex>) -> Result<Result<Coloring, OddWalk>, ColorError> {
    let idx = require_all(g, a)?;
    let mut bfs = Bfs::new(g.vertex_count());
    let mut out = Coloring::default();
    for &root in &idx {
        if bfs.seen(root) {
            continue;
        }
        let (members, conflict) = bfs.explore(g, root);
        if let Some((u, w)) = conflict {
            let mut walk: Vec<usize> = bfs.to_root(u).into_iter().rev().collect();
            walk.extend(bfs.cycle(u, w).into_iter().skip(1));
            walk.extend(bfs.to_root(u));
            let v = g.vertex(root);
            return Ok(Err(OddWalk { from: v, to: v, walk: vertices(g, walk) }));
        }
        if let Some(&bad) = idx.iter().find(|&&b| bfs.seen(b) && bfs.depth[b] % 2 == 1) {
            let walk: Vec<usize> = bfs.to_root(bad).into_iter().rev().collect();
            return Ok(Err(OddWalk { from: g.vertex(root), to: g.vertex(bad), walk: vertices(g, walk) }));
        }
        for i in members {
            out.colors.insert(g.vertex(i), (bfs.depth[i] % 2) as u8);
        }
    }
    Ok(Ok(out))
}

/// One peeling round of [`bounded_dilength_two_color`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeelStep {
    /// Largest `|didist|` over odd-separated pairs of the current set.
    pub bound: i64,
    pub epsilon: i8,
    /// Members with a partner at didist `epsilon * bound`.
    pub peeled: Vec<Vertex>,
    /// Members of `peeled` with an odd partner of the opposite sign.
    pub opposite: Vec<Vertex>,
    /// The rest of `peeled` outside the saturation of `opposite`.
    pub remaining: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedColoring {
    pub coloring: Coloring,
    pub steps: Vec<PeelStep>,
    /// Members colored by the final even-separation pass.
    pub base: Vec<Vertex>,
}

/// Two-colors `[A]` on an oriented forest by repeatedly peeling off the
/// members realizing the extreme odd directed distance, then finishing with
/// the parity coloring once every remaining separation is even.
pub fn bounded_dilength_two_color(g: &FiniteGraph, a: &BTreeSet<Vertex>) -> Result<BoundedColoring, ColorError> {
    let didx = DidistIndex::new(g)?;
    require_all(g, a)?;
    let mut current: BTreeSet<Vertex> = a.clone();
    let mut colored_components: BTreeSet<usize> = BTreeSet::new();
    let mut coloring = Coloring::default();
    let mut steps = Vec::new();
    let comp = |v: &Vertex| didx.component(g.index_of(v).unwrap());
    let dd = |x: &Vertex, y: &Vertex| didx.get(g.index_of(x).unwrap(), g.index_of(y).unwrap());

    loop {
        let mut bound = 0i64;
        for x in &current {
            for y in &current {
                if let Some(k) = dd(x, y) {
                    if k % 2 != 0 {
                        bound = bound.max(k);
                    }
                }
            }
        }
        if bound == 0 {
            break;
        }
        for epsilon in [1i8, -1] {
            let target = i64::from(epsilon) * bound;
            let peeled: Vec<Vertex> = current
                .iter()
                .filter(|x| !colored_components.contains(&comp(x)))
                .filter(|x| current.iter().any(|y| dd(x, y) == Some(target)))
                .copied()
                .collect();
            if peeled.is_empty() {
                continue;
            }
            let opposite: BTreeSet<Vertex> = peeled
                .iter()
                .filter(|x| {
                    current.iter().any(|y| {
                        dd(x, y).is_some_and(|k| k % 2 != 0 && k.signum() == -i64::from(epsilon))
                    })
                })
                .copied()
                .collect();
            let first = parity_two_color(g, &opposite)?.map_err(ColorError::ParityFailed)?;
            let first_domain = first.domain();
            let remaining: BTreeSet<Vertex> =
                peeled.iter().filter(|x| !first_domain.contains(x)).copied().collect();
            let second = parity_two_color(g, &remaining)?.map_err(ColorError::ParityFailed)?;
            for v in first.colors.keys().chain(second.colors.keys()) {
                colored_components.insert(comp(v));
            }
            coloring.absorb(first);
            coloring.absorb(second);
            steps.push(PeelStep {
                bound,
                epsilon,
                peeled,
                opposite: opposite.into_iter().collect(),
                remaining: remaining.into_iter().collect(),
            });
        }
        current.retain(|x| !colored_components.contains(&comp(x)));
    }
    let base = parity_two_color(g, &current)?.map_err(ColorError::ParityFailed)?;
    coloring.absorb(base);
    Ok(BoundedColoring { coloring, steps, base: current.into_iter().collect() })
}

/// Output of [`non_onto_two_color`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonOnto {
    /// Source vertices whose component is not mapped onto the target component.
    pub m: BTreeSet<Vertex>,
    /// For each such source component (keyed by its least vertex), the chosen
    /// target vertex just outside the image.
    pub anchors: BTreeMap<Vertex, Vertex>,
    pub coloring: Coloring,
}

fn is_path_forest(g: &FiniteGraph) -> bool {
    g.is_acyclic() && (0..g.vertex_count()).all(|i| g.degree(i) <= 2)
}

/// Colors the components of `l` that `phi` does not map onto a whole
/// component of `l2`: `c(x)` is the parity of the distance from `phi(x)` to
/// the least target vertex adjacent to the image.
pub fn non_onto_two_color(l: &FiniteGraph, l2: &FiniteGraph, phi: &PartialHom) -> Result<NonOnto, ColorError> {
    if !is_path_forest(l) || !is_path_forest(l2) {
        return Err(ColorError::NotPathForest);
    }
    check_hom(l, l2, phi).map_err(ColorError::NotHom)?;
    if let Some(v) = l.vertices().iter().find(|v| phi.get(v).is_none()) {
        return Err(ColorError::NotHom(HomViolation::Unmapped(*v)));
    }
    let (tcomp, _) = l2.components();
    let tmembers = l2.component_members();
    let mut out = NonOnto { m: BTreeSet::new(), anchors: BTreeMap::new(), coloring: Coloring::default() };
    for members in l.component_members() {
        let image: BTreeSet<usize> = members
            .iter()
            .map(|&i| l2.index_of(&phi.get(&l.vertex(i)).unwrap()).unwrap())
            .collect();
        let target = &tmembers[tcomp[*image.iter().next().unwrap()]];
        if image.len() == target.len() {
            continue;
        }
        let anchor = image
            .iter()
            .flat_map(|&i| l2.neighbors(i))
            .filter(|j| !image.contains(j))
            .map(|j| l2.vertex(j))
            .min()
            .expect("a proper connected subset of a component has a boundary");
        let dist = l2.bfs(l2.index_of(&anchor).unwrap());
        for &i in &members {
            let x = l.vertex(i);
            let d = dist[l2.index_of(&phi.get(&x).unwrap()).unwrap()].unwrap();
            out.m.insert(x);
            out.coloring.colors.insert(x, (d % 2) as u8);
        }
        out.anchors.insert(l.vertex(members[0]), anchor);
    }
    Ok(out)
}
