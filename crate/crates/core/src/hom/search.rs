use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use super::PartialHom;
use crate::graph::FiniteGraph;
use crate::vertex::Vertex;

/// Allowed images per source vertex; unlisted vertices are unconstrained.
pub type Constraints = BTreeMap<Vertex, BTreeSet<Vertex>>;

const UNREACHABLE: u32 = u32::MAX;

struct Search<'a> {
    source: &'a FiniteGraph,
    target: &'a FiniteGraph,
    directed: bool,
    /// Variable order and the already-ordered neighbor it hangs from.
    order: Vec<(usize, Option<usize>)>,
    allowed: Vec<Option<Vec<usize>>>,
    target_dist: Vec<Vec<u32>>,
    target_color: Vec<Option<u8>>,
    /// `(constrained source vertex, source distances from it)`.
    pinned: Vec<(usize, Vec<Option<usize>>)>,
}

impl Search<'_> {
    fn consistent(&self, assign: &[usize], v: usize, img: usize) -> bool {
        if let Some(allowed) = &self.allowed[v] {
            if allowed.binary_search(&img).is_err() {
                return false;
            }
        }
        for u in self.source.neighbors(v) {
            let iu = assign[u];
            if iu == usize::MAX {
                continue;
            }
            let ok = if self.directed {
                if self.source.has_arc(u, v) { self.target.has_arc(iu, img) } else { self.target.has_arc(img, iu) }
            } else {
                self.target.has_edge(iu, img)
            };
            if !ok {
                return false;
            }
        }
        // Every pinned vertex must stay reachable with a walk of the right length and parity.
        for (u, sdist) in &self.pinned {
            if assign[*u] != usize::MAX {
                continue;
            }
            let Some(ds) = sdist[v] else { continue };
            let allowed = self.allowed[*u].as_ref().unwrap();
            let feasible = allowed.iter().any(|&w| {
                let dt = self.target_dist[img][w];
                dt != UNREACHABLE
                    && dt as usize <= ds
                    && match (self.target_color[img], self.target_color[w]) {
                        (Some(a), Some(b)) => ((a ^ b) as usize) == ds % 2,
                        _ => true,
                    }
            });
            if !feasible {
                return false;
            }
        }
        true
    }

    fn candidates(&self, assign: &[usize], slot: usize) -> Vec<usize> {
        let (v, parent) = self.order[slot];
        let mut base: Vec<usize> = match parent {
            Some(p) => {
                let mut n: Vec<usize> = self.target.neighbors(assign[p]).collect();
                n.sort_unstable();
                n
            }
            None => match &self.allowed[v] {
                Some(a) => a.clone(),
                None => (0..self.target.vertex_count()).collect(),
            },
        };
        base.retain(|&img| self.consistent(assign, v, img));
        base
    }
}

fn bfs_order(g: &FiniteGraph) -> Vec<(usize, Option<usize>)> {
    let mut seen = vec![false; g.vertex_count()];
    let mut order = Vec::with_capacity(g.vertex_count());
    for root in 0..g.vertex_count() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        order.push((root, None));
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, Some(u)));
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

fn all_pairs(g: &FiniteGraph) -> Vec<Vec<u32>> {
    (0..g.vertex_count())
        .map(|s| g.bfs(s).into_iter().map(|d| d.map_or(UNREACHABLE, |d| d as u32)).collect())
        .collect()
}

/// Per-vertex side of the bipartition, `None` on non-bipartite components.
fn bipartition(g: &FiniteGraph) -> Vec<Option<u8>> {
    let mut color: Vec<Option<u8>> = vec![None; g.vertex_count()];
    for members in g.component_members() {
        let dist = g.bfs(members[0]);
        let bipartite = g
            .edge_indices()
            .iter()
            .filter(|(a, _)| dist[*a].is_some())
            .all(|&(a, b)| dist[a].unwrap() % 2 != dist[b].unwrap() % 2);
        if bipartite {
            for i in members {
                color[i] = Some((dist[i].unwrap() % 2) as u8);
            }
        }
    }
    color
}

/// Exhaustive backtracking search for a total homomorphism `source -> target`
/// respecting `constraints`. Variables are visited in breadth-first order and
/// values in target vertex order, so the first solution found is canonical.
pub fn find_hom(source: &FiniteGraph, target: &FiniteGraph, constraints: &Constraints) -> Option<PartialHom> {
    let ns = source.vertex_count();
    let mut allowed: Vec<Option<Vec<usize>>> = vec![None; ns];
    for (v, imgs) in constraints {
        let i = source.index_of(v)?;
        let mut list: Vec<usize> = imgs.iter().filter_map(|w| target.index_of(w)).collect();
        list.sort_unstable();
        allowed[i] = Some(list);
    }
    if ns == 0 {
        return Some(PartialHom::new());
    }
    if target.vertex_count() == 0 {
        return None;
    }
    let pinned = (0..ns).filter(|&i| allowed[i].is_some()).map(|i| (i, source.bfs(i))).collect();
    let search = Search {
        source,
        target,
        directed: source.is_oriented() && target.is_oriented(),
        order: bfs_order(source),
        allowed,
        target_dist: all_pairs(target),
        target_color: bipartition(target),
        pinned,
    };

    let mut assign = vec![usize::MAX; ns];
    let mut stack: Vec<(Vec<usize>, usize)> = Vec::with_capacity(ns);
    stack.push((search.candidates(&assign, 0), 0));
    loop {
        let slot = stack.len() - 1;
        let v = search.order[slot].0;
        let (cands, cursor) = stack.last_mut().unwrap();
        if *cursor == cands.len() {
            assign[v] = usize::MAX;
            stack.pop();
            if stack.is_empty() {
                return None;
            }
            continue;
        }
        assign[v] = cands[*cursor];
        *cursor += 1;
        if slot + 1 == ns {
            return Some((0..ns).map(|i| (source.vertex(i), target.vertex(assign[i]))).collect());
        }
        let next = search.candidates(&assign, slot + 1);
        stack.push((next, 0));
    }
}
