//! Paths, oriented paths and the stage graphs `L_{c,n}` / `L_{b,n}`.
//!
//! Stage `n+1` is two tail-suffixed copies of stage `n` joined through a new
//! middle path on the level-`(n+1)` vertices `(0)..(c(n+1))`:
//!
//! ```text
//! copy 0 ... s_n⌢0 -- (0) -- (1) -- ... -- (c(n+1)) -- s_n⌢1 ... copy 1
//! ```
//!
//! Because every stage is a simple path starting at the all-zeros vertex and
//! ending at `s_n`, the construction keeps the path order explicitly; the
//! graph itself stores its vertices in canonical order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::{FiniteGraph, StageMeta};
use crate::params::{DirectionWord, OddPair, OddSequence};
use crate::vertex::{Tail, Vertex, MAX_TAIL_LEN};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageError {
    /// Stage `stage` requested from a sequence with `len` entries.
    StageOutOfRange { stage: usize, len: usize },
    WordTooShort { needed: usize, found: usize },
    /// The vertex has level above the target stage, so it has no projection.
    OutsideDomain { vertex: Vertex, stage: usize },
    /// The vertex is not a point of `X_{c,n}`.
    NotInSpace { vertex: Vertex, stage: usize },
    /// Projection requested upwards (`n > n2`).
    StageOrder { from: usize, to: usize },
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StageError::StageOutOfRange { stage, len } => {
                write!(f, "stage {stage} needs at least {} entries of c, got {len}", stage + 1)
            }
            StageError::WordTooShort { needed, found } => {
                write!(f, "direction word has {found} entries, need more than {needed}")
            }
            StageError::OutsideDomain { vertex, stage } => {
                write!(f, "{vertex:?} has no projection to stage {stage}")
            }
            StageError::NotInSpace { vertex, stage } => {
                write!(f, "{vertex:?} is not a vertex of stage {stage}")
            }
            StageError::StageOrder { from, to } => {
                write!(f, "cannot project stage {from} to the higher stage {to}")
            }
        }
    }
}

impl core::error::Error for StageError {}

/// A stage graph read as a path from the all-zeros vertex to `s_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagePath {
    order: Vec<Vertex>,
    /// `signs[i] = +1` when the edge `order[i] -- order[i+1]` points forward.
    signs: Vec<i8>,
    positions: BTreeMap<Vertex, usize>,
}

impl StagePath {
    fn new(order: Vec<Vertex>, signs: Vec<i8>) -> StagePath {
        debug_assert_eq!(order.len(), signs.len() + 1);
        let positions = order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        StagePath { order, signs, positions }
    }

    pub fn order(&self) -> &[Vertex] {
        &self.order
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn position(&self, v: &Vertex) -> Option<usize> {
        self.positions.get(v).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Edge count.
    pub fn length(&self) -> usize {
        self.order.len() - 1
    }

    pub fn first(&self) -> Vertex {
        self.order[0]
    }

    pub fn last(&self) -> Vertex {
        self.order[self.order.len() - 1]
    }

    /// Distance along the path.
    pub fn dist(&self, x: &Vertex, y: &Vertex) -> Option<usize> {
        Some(self.position(x)?.abs_diff(self.position(y)?))
    }

    /// Signed length of the walk along the path from `x` to `y`.
    pub fn didist(&self, x: &Vertex, y: &Vertex) -> Option<i64> {
        let (a, b) = (self.position(x)?, self.position(y)?);
        let (lo, hi) = (a.min(b), a.max(b));
        let sum: i64 = self.signs[lo..hi].iter().map(|&s| i64::from(s)).sum();
        Some(if a <= b { sum } else { -sum })
    }

    fn graph(&self, oriented: bool, meta: Option<StageMeta>) -> FiniteGraph {
        let mut vertices = self.order.clone();
        vertices.sort_unstable();
        let arcs = self.order.windows(2).zip(&self.signs).map(|(w, &s)| {
            if s > 0 { (w[0], w[1]) } else { (w[1], w[0]) }
        });
        let g = FiniteGraph::new(vertices, arcs, oriented).expect("stage construction yields a simple path");
        match meta {
            Some(m) => g.with_meta(m),
            None => g,
        }
    }
}

/// `L_n`: vertices `(0)..(n)`, edges between consecutive labels.
pub fn build_path(n: u64) -> FiniteGraph {
    FiniteGraph::from_labels((n + 1) as usize, (1..=n as usize).map(|i| (i - 1, i)), false)
        .expect("path is simple")
}

/// `L_n^d`: the path with edge `{i-1, i}` oriented by `d(i)`.
pub fn build_oriented_path(n: u64, d: &DirectionWord) -> Result<FiniteGraph, StageError> {
    if d.len() as u64 <= n {
        return Err(StageError::WordTooShort { needed: n as usize, found: d.len() });
    }
    let arcs = (1..=n as usize).map(|i| if d.get(i) == Some(1) { (i - 1, i) } else { (i, i - 1) });
    Ok(FiniteGraph::from_labels((n + 1) as usize, arcs, true).expect("path is simple"))
}

fn check_stage(c: &OddSequence, n: usize) -> Result<(), StageError> {
    if n >= c.len() || n > MAX_TAIL_LEN {
        return Err(StageError::StageOutOfRange { stage: n, len: c.len() });
    }
    Ok(())
}

/// `s_n`: `(c(0))` for `n = 0`, otherwise `(0)^n ⌢ (1)`.
pub fn special_vertex(c: &OddSequence, n: usize) -> Result<Vertex, StageError> {
    check_stage(c, n)?;
    Ok(if n == 0 {
        Vertex::label(c.values()[0])
    } else {
        Vertex::new(0, 0, Tail::zeros(n - 1).push(1))
    })
}

/// The all-zeros vertex `(0)^{n+1}`, the other endpoint of stage `n`.
pub fn zero_vertex(n: usize) -> Vertex {
    Vertex::new(0, 0, Tail::zeros(n))
}

fn path_with_signs(c: &OddSequence, d: Option<&[DirectionWord]>, n: usize) -> StagePath {
    let sign = |stage: usize, i: usize| d.map_or(1, |d| d[stage].get(i).expect("word covers the stage"));
    let c0 = c.values()[0];
    let mut order: Vec<Vertex> = (0..=c0).map(Vertex::label).collect();
    let mut signs: Vec<i8> = (1..=c0 as usize).map(|i| sign(0, i)).collect();
    for stage in 1..=n {
        let ci = c.values()[stage];
        let level = stage as u32;
        let mut next = Vec::with_capacity(2 * order.len() + ci as usize + 1);
        let mut next_signs = Vec::with_capacity(next.capacity());
        next.extend(order.iter().map(|v| v.extend(0)));
        next_signs.extend_from_slice(&signs);
        next_signs.push(sign(stage, 0));
        next.extend((0..=ci).map(|k| Vertex::new(level, k, Tail::EMPTY)));
        next_signs.extend((1..=ci as usize).map(|i| sign(stage, i)));
        next_signs.push(sign(stage, ci as usize + 1));
        next.extend(order.iter().rev().map(|v| v.extend(1)));
        next_signs.extend(signs.iter().rev().map(|s| -s));
        order = next;
        signs = next_signs;
    }
    StagePath::new(order, signs)
}

/// The path order of `L_{c,n}` (all edges read as forward).
pub fn stage_path(c: &OddSequence, n: usize) -> Result<StagePath, StageError> {
    check_stage(c, n)?;
    Ok(path_with_signs(c, None, n))
}

/// The path order of `L_{b,n}` with its orientation signs.
pub fn oriented_stage_path(b: &OddPair, n: usize) -> Result<StagePath, StageError> {
    check_stage(b.c(), n)?;
    Ok(path_with_signs(b.c(), Some(b.d()), n))
}

/// `L_{c,n}`.
pub fn build_stage(c: &OddSequence, n: usize) -> Result<FiniteGraph, StageError> {
    let meta = StageMeta { c: c.prefix(n + 1), stage: n };
    Ok(stage_path(c, n)?.graph(false, Some(meta)))
}

/// `L_{b,n}`.
pub fn build_oriented_stage(b: &OddPair, n: usize) -> Result<FiniteGraph, StageError> {
    let meta = StageMeta { c: b.c().prefix(n + 1), stage: n };
    Ok(oriented_stage_path(b, n)?.graph(true, Some(meta)))
}

/// Whether `v` is a point of `X_{c,n}`.
pub fn in_space(c: &OddSequence, n: usize, v: &Vertex) -> bool {
    v.stage() == n && c.get(v.level as usize).is_some_and(|cm| v.head <= cm)
}

/// `X_{c,n}` in canonical order.
pub fn enumerate_space(c: &OddSequence, n: usize) -> Result<Vec<Vertex>, StageError> {
    check_stage(c, n)?;
    let mut out = Vec::new();
    for m in 0..=n {
        let width = n - m;
        for k in 0..=c.values()[m] {
            for x in 0..(1u64 << width) {
                out.push(Vertex::new(m as u32, k, Tail::from_number(width, x)));
            }
        }
    }
    Ok(out)
}

/// `π_{c,n,n2}`: keep level and head, truncate the tail to `n - level` bits.
pub fn project(c: &OddSequence, n: usize, n2: usize, v: &Vertex) -> Result<Vertex, StageError> {
    if n > n2 {
        return Err(StageError::StageOrder { from: n2, to: n });
    }
    if !in_space(c, n2, v) {
        return Err(StageError::NotInSpace { vertex: *v, stage: n2 });
    }
    if v.level as usize > n {
        return Err(StageError::OutsideDomain { vertex: *v, stage: n });
    }
    Ok(Vertex::new(v.level, v.head, v.tail.truncate(n - v.level as usize)))
}

/// Sibling pairs `(k)⌢t⌢(0)`, `(k)⌢t⌢(1)` of `X_{c,n}`.
pub fn sibling_pairs(c: &OddSequence, n: usize) -> Result<Vec<(Vertex, Vertex)>, StageError> {
    Ok(enumerate_space(c, n)?
        .into_iter()
        .filter(|v| v.tail.last() == Some(0))
        .map(|v| {
            let last = v.tail.len() - 1;
            (v, Vertex { tail: v.tail.flip(last), ..v })
        })
        .collect())
}

/// Result of [`verify_stage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageReport {
    pub stage: usize,
    pub vertex_count: usize,
    pub expected_vertex_count: Option<u64>,
    pub connected: bool,
    pub acyclic: bool,
    pub max_degree: usize,
    pub endpoints: Vec<Vertex>,
    pub expected_endpoints: Vec<Vertex>,
    pub special: Option<Vertex>,
    pub vertex_set_ok: bool,
    pub projection_ok: bool,
    pub failures: Vec<String>,
}

impl StageReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `g` is a simple path from `(0)^{n+1}` to `s_n` on `X_{c,n}`
/// whose edges project into the previous stage.
pub fn verify_stage(g: &FiniteGraph) -> StageReport {
    let mut failures = Vec::new();
    let (stage, c) = match g.meta() {
        Some(m) => (m.stage, Some(m.c.clone())),
        None => {
            failures.push(String::from("graph carries no stage metadata"));
            (0, None)
        }
    };
    let (_, comps) = g.components();
    let connected = comps == 1;
    let acyclic = g.is_acyclic();
    let max_degree = (0..g.vertex_count()).map(|i| g.degree(i)).max().unwrap_or(0);
    let mut endpoints: Vec<Vertex> =
        (0..g.vertex_count()).filter(|&i| g.degree(i) < 2).map(|i| g.vertex(i)).collect();
    endpoints.sort_unstable();
    if !connected {
        failures.push(format!("disconnected: {comps} components"));
    }
    if !acyclic {
        failures.push(String::from("contains a cycle"));
    }
    if max_degree > 2 {
        failures.push(format!("maximum degree {max_degree} exceeds 2"));
    }

    let mut expected_endpoints = Vec::new();
    let mut special = None;
    let mut expected_vertex_count = None;
    let mut vertex_set_ok = false;
    let mut projection_ok = false;
    if let Some(c) = c {
        expected_vertex_count = c.stage_size(stage);
        match (enumerate_space(&c, stage), special_vertex(&c, stage)) {
            (Ok(space), Ok(s)) => {
                special = Some(s);
                vertex_set_ok = space.len() == g.vertex_count() && space.iter().all(|v| g.contains(v));
                if !vertex_set_ok {
                    failures.push(String::from("vertex set differs from the stage space"));
                }
                let z = zero_vertex(stage);
                expected_endpoints = if g.vertex_count() == 1 { alloc::vec![z] } else { alloc::vec![z, s] };
                expected_endpoints.sort_unstable();
                expected_endpoints.dedup();
                if endpoints != expected_endpoints {
                    failures.push(format!(
                        "endpoints {endpoints:?} differ from expected {expected_endpoints:?}"
                    ));
                }
                projection_ok = true;
                if stage > 0 {
                    let prev = build_stage(&c, stage - 1).expect("prefix stage exists");
                    for (u, v) in g.edges() {
                        if u.level as usize >= stage || v.level as usize >= stage {
                            continue;
                        }
                        let pu = project(&c, stage - 1, stage, &u);
                        let pv = project(&c, stage - 1, stage, &v);
                        let ok = match (pu, pv) {
                            (Ok(pu), Ok(pv)) => match (prev.index_of(&pu), prev.index_of(&pv)) {
                                (Some(a), Some(b)) => prev.has_edge(a, b),
                                _ => false,
                            },
                            _ => false,
                        };
                        if !ok {
                            projection_ok = false;
                            failures.push(format!("edge {{{u}, {v}}} does not project to an edge"));
                            break;
                        }
                    }
                }
            }
            (Err(e), _) | (_, Err(e)) => failures.push(format!("{e}")),
        }
    }
    StageReport {
        stage,
        vertex_count: g.vertex_count(),
        expected_vertex_count,
        connected,
        acyclic,
        max_degree,
        endpoints,
        expected_endpoints,
        special,
        vertex_set_ok,
        projection_ok,
        failures,
    }
}

/// Vertices of `g` with level below `k`.
pub fn levels_below(g: &FiniteGraph, k: usize) -> BTreeSet<Vertex> {
    g.vertices().iter().copied().filter(|v| (v.level as usize) < k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn seq(s: &str) -> OddSequence {
        s.parse().unwrap()
    }

    fn v(stage: usize, s: &[u64]) -> Vertex {
        Vertex::from_sequence(stage, s).unwrap()
    }

    #[test]
    fn small_paths() {
        let p = build_path(3);
        assert_eq!(p.vertex_count(), 4);
        assert_eq!(p.edge_count(), 3);
        assert_eq!(build_path(0).edge_count(), 0);
        let d: DirectionWord = "+-+".parse().unwrap();
        let o = build_oriented_path(2, &d).unwrap();
        assert!(o.has_arc(1, 0) && o.has_arc(1, 2));
        let d: DirectionWord = "-++".parse().unwrap();
        let o = build_oriented_path(2, &d).unwrap();
        assert!(o.has_arc(0, 1) && o.has_arc(1, 2));
        assert!(build_oriented_path(3, &d).is_err());
    }

    #[test]
    fn special_vertices() {
        let c = seq("1,1,3");
        assert_eq!(special_vertex(&c, 0).unwrap(), v(0, &[1]));
        assert_eq!(special_vertex(&c, 1).unwrap(), v(1, &[0, 1]));
        assert_eq!(special_vertex(&c, 2).unwrap(), v(2, &[0, 0, 1]));
        assert!(special_vertex(&c, 3).is_err());
    }

    #[test]
    fn stage_one_order() {
        let p = stage_path(&seq("1,1"), 1).unwrap();
        let expected = [
            v(1, &[0, 0]),
            v(1, &[1, 0]),
            v(1, &[0]),
            v(1, &[1]),
            v(1, &[1, 1]),
            v(1, &[0, 1]),
        ];
        assert_eq!(p.order(), &expected[..]);
        assert_eq!(p.dist(&expected[0], &expected[5]), Some(5));
    }

    #[test]
    fn oriented_stage_one() {
        let b = OddPair::all_plus(seq("1,1"));
        let g = build_oriented_stage(&b, 1).unwrap();
        let arcs = g.arc_set();
        let want = [
            (v(1, &[0, 0]), v(1, &[1, 0])),
            (v(1, &[1, 0]), v(1, &[0])),
            (v(1, &[0]), v(1, &[1])),
            (v(1, &[1]), v(1, &[1, 1])),
            (v(1, &[0, 1]), v(1, &[1, 1])),
        ];
        assert_eq!(arcs, want.into_iter().collect());
        let p = oriented_stage_path(&b, 1).unwrap();
        assert_eq!(p.didist(&v(1, &[0, 0]), &v(1, &[0, 1])), Some(3));
    }

    #[test]
    fn projection_rules() {
        let c = seq("1,1,3");
        assert_eq!(project(&c, 0, 1, &v(1, &[1, 0])).unwrap(), v(0, &[1]));
        assert_eq!(project(&c, 1, 2, &v(2, &[0, 1, 0])).unwrap(), v(1, &[0, 1]));
        assert!(matches!(
            project(&c, 1, 2, &v(2, &[2])),
            Err(StageError::OutsideDomain { .. })
        ));
    }

    #[test]
    fn verify_passes_and_detects_cut() {
        let c = seq("1,1,3,5");
        for n in 0..4 {
            let r = verify_stage(&build_stage(&c, n).unwrap());
            assert!(r.passed(), "{r:?}");
        }
        let g = build_stage(&seq("1,1"), 1).unwrap();
        let r = verify_stage(&g);
        assert_eq!(r.endpoints, vec![v(1, &[0, 0]), v(1, &[0, 1])]);
        let cut = g.without_edge(&v(1, &[0]), &v(1, &[1])).unwrap();
        let r = verify_stage(&cut);
        assert!(!r.connected && !r.passed());
    }

    #[test]
    fn space_enumeration_is_canonical() {
        let c = seq("1,1,3,5,7");
        for n in 0..5 {
            let xs = enumerate_space(&c, n).unwrap();
            assert_eq!(xs.len() as u64, c.stage_size(n).unwrap());
            assert!(xs.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
