//! Library results against independent brute-force constructions.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{all_pairs, label, random_forest, random_subset, random_walk};
use lzero_core::antibasis::{gen_star, GenStrategy};
use lzero_core::coloring::{parity_two_color, two_color};
use lzero_core::hom::{extend_hom, find_hom, is_hom, Constraints, PartialHom};
use lzero_core::metrics::{didist, dist, walk_dilength, Walk};
use lzero_core::stage::{build_oriented_stage, build_stage, project};
use lzero_core::{DirectionWord, FiniteGraph, OddPair, OddSequence, Tail, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn special(c: &[u64], n: usize) -> Vertex {
    if n == 0 {
        Vertex::new(0, c[0], Tail::EMPTY)
    } else {
        let mut bits = vec![0u8; n - 1];
        bits.push(1);
        Vertex::new(0, 0, Tail::from_bits(&bits).unwrap())
    }
}

fn mid(level: usize, k: u64) -> Vertex {
    Vertex::new(level as u32, k, Tail::EMPTY)
}

/// Stage arcs straight from the recursive definition: copies, middle path,
/// two connectors. Every arc is oriented by its direction entry.
fn oracle_arcs(c: &[u64], d: &[Vec<i8>], n: usize) -> BTreeSet<(Vertex, Vertex)> {
    let orient = |a: Vertex, b: Vertex, s: i8| if s > 0 { (a, b) } else { (b, a) };
    let mut arcs: BTreeSet<(Vertex, Vertex)> =
        (1..=c[0]).map(|i| orient(mid(0, i - 1), mid(0, i), d[0][i as usize])).collect();
    for m in 1..=n {
        let mut next = BTreeSet::new();
        for &(a, b) in &arcs {
            for bit in 0..2 {
                next.insert((a.extend(bit), b.extend(bit)));
            }
        }
        for i in 1..=c[m] {
            next.insert(orient(mid(m, i - 1), mid(m, i), d[m][i as usize]));
        }
        let s = special(c, m - 1);
        next.insert(orient(s.extend(0), mid(m, 0), d[m][0]));
        next.insert(orient(mid(m, c[m]), s.extend(1), d[m][c[m] as usize + 1]));
        arcs = next;
    }
    arcs
}

fn undirected(arcs: &BTreeSet<(Vertex, Vertex)>) -> BTreeSet<(Vertex, Vertex)> {
    arcs.iter().map(|&(a, b)| if a <= b { (a, b) } else { (b, a) }).collect()
}

fn random_pair(rng: &mut ChaCha8Rng, c: &[u64]) -> OddPair {
    let d = c
        .iter()
        .map(|&ci| DirectionWord::new((0..ci + 2).map(|_| if rng.gen_bool(0.5) { 1 } else { -1 }).collect()).unwrap())
        .collect();
    OddPair::new(OddSequence::new(c.to_vec()).unwrap(), d).unwrap()
}

#[test]
fn stage_edges_match_definition() {
    for c in [vec![1], vec![1, 1], vec![3, 1, 5], vec![1, 1, 3, 5, 7], vec![5, 3, 1, 1]] {
        let seq = OddSequence::new(c.clone()).unwrap();
        let plus: Vec<Vec<i8>> = c.iter().map(|&ci| vec![1; ci as usize + 2]).collect();
        for n in 0..c.len() {
            let g = build_stage(&seq, n).unwrap();
            assert_eq!(g.edge_set(), undirected(&oracle_arcs(&c, &plus, n)), "c={c:?} n={n}");
        }
    }
}

#[test]
fn oriented_stage_arcs_match_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let len = rng.gen_range(1..=4);
        let c: Vec<u64> = (0..len).map(|_| 2 * rng.gen_range(0..3) + 1).collect();
        let b = random_pair(&mut rng, &c);
        let d: Vec<Vec<i8>> = b.d().iter().map(|w| w.iter().collect()).collect();
        for n in 0..len {
            let g = build_oriented_stage(&b, n).unwrap();
            assert_eq!(g.arc_set(), oracle_arcs(&c, &d, n));
        }
    }
}

#[test]
fn frozen_stage_values() {
    let seq: OddSequence = "1,1,3,5,7".parse().unwrap();
    let counts: Vec<usize> = (0..5).map(|n| build_stage(&seq, n).unwrap().vertex_count()).collect();
    assert_eq!(counts, vec![2, 6, 16, 38, 84]);
    let g = build_stage(&"1,1".parse().unwrap(), 1).unwrap();
    let x = Vertex::from_sequence(1, &[0, 0]).unwrap();
    let y = Vertex::from_sequence(1, &[0, 1]).unwrap();
    assert_eq!(dist(&g, &x, &y), Ok(Some(5)));
}

#[test]
fn distances_match_floyd_warshall() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let g = random_forest(&mut rng, 15, 0.8, false);
        let fw = all_pairs(&g);
        for (i, row) in fw.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                assert_eq!(dist(&g, &g.vertex(i), &g.vertex(j)).unwrap(), want);
            }
        }
    }
    let g = build_stage(&"1,3,1".parse().unwrap(), 2).unwrap();
    let fw = all_pairs(&g);
    for (i, row) in fw.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            assert_eq!(dist(&g, &g.vertex(i), &g.vertex(j)).unwrap(), want);
        }
    }
}

#[test]
fn didist_matches_random_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let g = random_forest(&mut rng, 25, 0.85, true);
        for _ in 0..40 {
            let start = rng.gen_range(0..g.vertex_count());
            let steps = rng.gen_range(0..30);
            let w = Walk::trace(&g, random_walk(&mut rng, &g, start, steps)).unwrap();
            let k = walk_dilength(&g, &w).unwrap();
            assert_eq!(didist(&g, &w.first(), &w.last()).unwrap(), Some(k));
            assert_eq!(k.rem_euclid(2) as usize, w.length() % 2);
        }
    }
}

fn brute_two_colorable(g: &FiniteGraph) -> bool {
    let n = g.vertex_count();
    (0u32..1 << n).any(|mask| g.edge_indices().iter().all(|&(a, b)| (mask >> a & 1) != (mask >> b & 1)))
}

/// Every walk between members of `a` is even iff a 2-coloring exists that is
/// constant on `a`, restricted to the components meeting `a`.
fn brute_parity(g: &FiniteGraph, a: &BTreeSet<Vertex>) -> bool {
    let n = g.vertex_count();
    let (comp, _) = g.components();
    let touched: BTreeSet<usize> = a.iter().map(|v| comp[g.index_of(v).unwrap()]).collect();
    let members: Vec<usize> = (0..n).filter(|&i| touched.contains(&comp[i])).collect();
    (0u32..1 << members.len()).any(|mask| {
        let color = |i: usize| members.iter().position(|&m| m == i).map(|p| mask >> p & 1);
        let proper = g.edge_indices().iter().all(|&(x, y)| match (color(x), color(y)) {
            (Some(p), Some(q)) => p != q,
            _ => true,
        });
        proper && a.iter().all(|v| color(g.index_of(v).unwrap()) == Some(0))
    })
}

#[test]
fn colorings_match_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for round in 0..150 {
        let n = rng.gen_range(1..=10);
        let mut edges = BTreeSet::new();
        let m = rng.gen_range(0..=n + 2);
        for _ in 0..m {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let g = FiniteGraph::from_labels(n, edges, false).unwrap();
        let tc = two_color(&g);
        assert_eq!(tc.is_ok(), brute_two_colorable(&g), "round {round}");
        if let Ok(c) = &tc {
            assert!(c.is_proper(&g));
        }
        let a = random_subset(&mut rng, &g, 0.3);
        let pc = parity_two_color(&g, &a).unwrap();
        assert_eq!(pc.is_ok(), brute_parity(&g, &a), "round {round}");
        match pc {
            Ok(c) => assert!(c.is_proper(&g) && a.iter().all(|v| c.get(v) == Some(0))),
            Err(w) => {
                assert!(a.contains(&w.from) && a.contains(&w.to));
                assert_eq!((w.walk.len() - 1) % 2, 1);
                assert!(Walk::trace(&g, w.walk).is_ok());
            }
        }
    }
}

fn brute_hom_exists(s: &FiniteGraph, t: &FiniteGraph, cons: &Constraints) -> bool {
    let (ns, nt) = (s.vertex_count(), t.vertex_count());
    let total = (nt as u64).pow(ns as u32);
    (0..total).any(|code| {
        let mut x = code;
        let phi: PartialHom = (0..ns)
            .map(|i| {
                let img = t.vertex((x % nt as u64) as usize);
                x /= nt as u64;
                (s.vertex(i), img)
            })
            .collect();
        cons.iter().all(|(v, allowed)| allowed.contains(&phi.get(v).unwrap())) && is_hom(s, t, &phi)
    })
}

#[test]
fn find_hom_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..120 {
        let ns = rng.gen_range(1..=6);
        let nt = rng.gen_range(1..=4);
        let oriented = rng.gen_bool(0.3);
        let rand_graph = |rng: &mut ChaCha8Rng, n: usize| {
            let mut edges = BTreeSet::new();
            for a in 0..n {
                for b in a + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.insert(if rng.gen_bool(0.5) { (a, b) } else { (b, a) });
                    }
                }
            }
            FiniteGraph::from_labels(n, edges, oriented).unwrap()
        };
        let s = rand_graph(&mut rng, ns);
        let t = rand_graph(&mut rng, nt);
        let mut cons = Constraints::new();
        if rng.gen_bool(0.5) {
            let v = label(rng.gen_range(0..ns));
            cons.insert(v, (0..nt).filter(|_| rng.gen_bool(0.5)).map(label).collect());
        }
        let found = find_hom(&s, &t, &cons);
        assert_eq!(found.is_some(), brute_hom_exists(&s, &t, &cons));
        if let Some(phi) = found {
            assert!(is_hom(&s, &t, &phi));
            assert_eq!(phi.len(), ns);
        }
    }
}

#[test]
fn sixteen_path_extension_agrees_with_search() {
    let c: OddSequence = "1,1".parse().unwrap();
    let g = FiniteGraph::from_labels(16, (1..16).map(|i| (i - 1, i)), false).unwrap();
    let all: BTreeSet<Vertex> = (0..16).map(label).collect();
    let b: BTreeSet<Vertex> = [0, 1, 13, 14, 15].into_iter().map(label).collect();
    let (z, o) = (Vertex::label(0), Vertex::label(1));
    let phi: PartialHom = [(0, z), (1, o), (13, z), (14, o), (15, z)].into_iter().map(|(i, v)| (label(i), v)).collect();
    let ext = extend_hom(&g, &b, &all, &phi, &c, 0).unwrap();
    let target = build_stage(&c, 1).unwrap();
    let mut cons = Constraints::new();
    for x in &b {
        let want = phi.get(x).unwrap();
        let allowed: BTreeSet<Vertex> = target
            .vertices()
            .iter()
            .copied()
            .filter(|v| project(&c, 0, 1, v).ok() == Some(want))
            .collect();
        cons.insert(*x, allowed);
    }
    let found = find_hom(&g, &target, &cons).expect("oracle finds a lift");
    assert!(is_hom(&g, &target, &found) && is_hom(&g, &target, &ext));
    let seq = |v: &Vertex| v.sequence();
    let got: Vec<Vec<u64>> = [0, 1, 13, 14, 15].iter().map(|&i| seq(&ext.get(&label(i)).unwrap())).collect();
    assert_eq!(got, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1], vec![0, 1]]);
}

/// Least odd lengths found by counting up, with the inequality evaluated
/// from scratch each time.
fn brute_star_lengths(stages: usize) -> Vec<u64> {
    let mut sigmas: Vec<i128> = Vec::new();
    let mut out = Vec::new();
    for i in 0..stages {
        let mut c: u64 = 1;
        loop {
            let lhs = c as i128 + 2;
            let mut rhs = 0i128;
            for (j, s) in sigmas.iter().enumerate() {
                rhs += 8 * (1i128 << (i - j)) * s.abs();
            }
            if lhs > rhs {
                break;
            }
            c += 2;
        }
        out.push(c);
        sigmas.push(c as i128 + 2);
    }
    out
}

#[test]
fn gen_star_matches_search() {
    assert_eq!(brute_star_lengths(3), vec![1, 47, 879]);
    for k in 1..=5 {
        let b = gen_star(k, &GenStrategy::MinimalAllPlus).unwrap();
        assert_eq!(b.c().values(), &brute_star_lengths(k)[..]);
    }
}

#[test]
fn sibling_didistance_is_the_stage_sigma() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let len = rng.gen_range(2..=4);
        let c: Vec<u64> = (0..len).map(|_| 2 * rng.gen_range(0..3) + 1).collect();
        let b = random_pair(&mut rng, &c);
        let n = len - 1;
        let g = build_oriented_stage(&b, n).unwrap();
        let sig = b.sigma_profile();
        let mut checked: BTreeMap<usize, usize> = BTreeMap::new();
        for v in g.vertices() {
            for i in 0..v.tail.len() {
                if v.tail.get(i) == 0 {
                    let w = Vertex { tail: v.tail.flip(i), ..*v };
                    let stage = v.level as usize + i + 1;
                    assert_eq!(didist(&g, v, &w).unwrap(), Some(sig[stage]), "{v:?} {w:?}");
                    *checked.entry(stage).or_default() += 1;
                }
            }
        }
        assert!(!checked.is_empty());
    }
}
