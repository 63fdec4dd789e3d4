mod common;

use std::collections::BTreeSet;

use common::{random_forest, random_subset, random_walk};
use lzero_core::antibasis::{check_growth, check_star, gen_star, verify_interval, verify_separation, GenStrategy, IntervalMode};
use lzero_core::coloring::{bounded_dilength_two_color, non_onto_two_color, parity_two_color};
use lzero_core::hom::{complement_components, extend_hom, is_hom, PartialHom};
use lzero_core::metrics::{didist, dist, structure, walk_dilength, DidistIndex, Walk};
use lzero_core::stage::{
    build_oriented_stage, build_stage, enumerate_space, levels_below, oriented_stage_path, project, sibling_pairs,
    special_vertex, stage_path, verify_stage, zero_vertex,
};
use lzero_core::{DirectionWord, FiniteGraph, OddPair, OddSequence, Vertex};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn odd_seq(max_len: usize, max_val: u64) -> impl Strategy<Value = OddSequence> {
    prop::collection::vec(0..=max_val / 2, 1..=max_len).prop_map(|v| OddSequence::new(v.into_iter().map(|x| 2 * x + 1).collect()).unwrap())
}

fn odd_pair(max_len: usize, max_val: u64) -> impl Strategy<Value = OddPair> {
    odd_seq(max_len, max_val).prop_flat_map(|c| {
        let words: Vec<_> = c
            .values()
            .iter()
            .map(|&ci| prop::collection::vec(prop::bool::ANY, ci as usize + 2))
            .collect();
        (Just(c), words).prop_map(|(c, ws)| {
            let d = ws
                .into_iter()
                .map(|w| DirectionWord::new(w.into_iter().map(|b| if b { 1 } else { -1 }).collect()).unwrap())
                .collect();
            OddPair::new(c, d).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stages_are_simple_paths(c in odd_seq(5, 7)) {
        for n in 0..c.len() {
            let g = build_stage(&c, n).unwrap();
            let r = verify_stage(&g);
            prop_assert!(r.passed(), "{:?}", r.failures);
            prop_assert_eq!(g.vertex_count() as u64, c.stage_size(n).unwrap());
            let s = structure(&g);
            prop_assert!(s.is_path());
            for m in 0..n {
                for e in [zero_vertex(n), special_vertex(&c, n).unwrap()] {
                    let p = project(&c, m, n, &e).unwrap();
                    prop_assert!(p == zero_vertex(m) || p == special_vertex(&c, m).unwrap());
                }
            }
        }
    }

    #[test]
    fn edges_project_to_edges(c in odd_seq(5, 5)) {
        for n in 1..c.len() {
            let g = build_stage(&c, n).unwrap();
            let prev = build_stage(&c, n - 1).unwrap();
            for (u, v) in g.edges() {
                if (u.level as usize) < n && (v.level as usize) < n {
                    let pu = project(&c, n - 1, n, &u).unwrap();
                    let pv = project(&c, n - 1, n, &v).unwrap();
                    prop_assert!(prev.has_edge(prev.index_of(&pu).unwrap(), prev.index_of(&pv).unwrap()));
                }
            }
        }
    }

    #[test]
    fn symmetrization_recovers_stage(b in odd_pair(5, 5)) {
        for n in 0..b.len() {
            let o = build_oriented_stage(&b, n).unwrap();
            let u = build_stage(b.c(), n).unwrap();
            let both: BTreeSet<(Vertex, Vertex)> = o.arc_set().into_iter().chain(o.reversed().arc_set()).collect();
            prop_assert_eq!(both, u.arc_set());
            prop_assert_eq!(o.symmetrized().edge_set(), u.edge_set());
        }
    }

    #[test]
    fn siblings_are_odd_apart(c in odd_seq(5, 5)) {
        for n in 0..c.len() {
            let g = build_stage(&c, n).unwrap();
            for (x, y) in sibling_pairs(&c, n).unwrap() {
                prop_assert_eq!(dist(&g, &x, &y).unwrap().unwrap() % 2, 1);
            }
        }
    }

    #[test]
    fn walks_agree_with_didist(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=40);
        let g = random_forest(&mut rng, n, 0.8, true);
        let idx = DidistIndex::new(&g).unwrap();
        for _ in 0..50 {
            let start = rng.gen_range(0..n);
            let len = rng.gen_range(0..40);
            let w = Walk::trace(&g, random_walk(&mut rng, &g, start, len)).unwrap();
            let k = walk_dilength(&g, &w).unwrap();
            prop_assert_eq!(k.rem_euclid(2) as usize, w.length() % 2);
            prop_assert_eq!(didist(&g, &w.first(), &w.last()).unwrap(), Some(k));
        }
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(idx.get(a, b), idx.get(b, a).map(|k| -k));
                for c in 0..n.min(6) {
                    if let (Some(x), Some(y)) = (idx.get(a, c), idx.get(c, b)) {
                        prop_assert_eq!(idx.get(a, b), Some(x + y));
                    }
                }
            }
        }
    }

    #[test]
    fn homomorphisms_preserve_didist(b in odd_pair(3, 3), seed in any::<u64>()) {
        let n = b.len() - 1;
        let target = build_oriented_stage(&b, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = rng.gen_range(0..target.vertex_count());
        let walk = random_walk(&mut rng, &target, start, 30);
        // The walk is a homomorphism from a path whose edges copy the target arcs.
        let arcs = walk.windows(2).enumerate().map(|(i, w)| {
            let (a, c) = (target.index_of(&w[0]).unwrap(), target.index_of(&w[1]).unwrap());
            if target.has_arc(a, c) { (i, i + 1) } else { (i + 1, i) }
        });
        let source = FiniteGraph::from_labels(walk.len(), arcs, true).unwrap();
        let phi: PartialHom = walk.iter().enumerate().map(|(i, v)| (Vertex::label(i as u64), *v)).collect();
        prop_assert!(is_hom(&source, &target, &phi));
        for i in 0..walk.len() {
            for j in 0..walk.len() {
                let (x, y) = (Vertex::label(i as u64), Vertex::label(j as u64));
                prop_assert_eq!(didist(&source, &x, &y).unwrap(), didist(&target, &walk[i], &walk[j]).unwrap());
            }
        }
    }

    #[test]
    fn colorings_are_proper(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=40);
        let g = random_forest(&mut rng, n, 0.85, true);
        let a = random_subset(&mut rng, &g, 0.3);
        let r = bounded_dilength_two_color(&g, &a).unwrap();
        prop_assert!(r.coloring.is_proper(&g));
        let (comp, _) = g.components();
        for i in 0..n {
            let touched = a.iter().any(|v| comp[g.index_of(v).unwrap()] == comp[i]);
            prop_assert_eq!(r.coloring.get(&g.vertex(i)).is_some(), touched);
        }
        if let Ok(p) = parity_two_color(&g, &a).unwrap() {
            prop_assert!(p.is_proper(&g));
            prop_assert!(r.steps.is_empty());
        }
    }

    #[test]
    fn non_onto_set_is_saturated(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let target = build_stage(&"1,3".parse().unwrap(), 1).unwrap();
        let pieces = rng.gen_range(1..=4);
        let mut edges = Vec::new();
        let mut phi = PartialHom::new();
        let mut next = 0usize;
        for _ in 0..pieces {
            let start = rng.gen_range(0..target.vertex_count());
            let len = rng.gen_range(0..12);
            let walk = random_walk(&mut rng, &target, start, len);
            for (i, v) in walk.iter().enumerate() {
                phi.insert(Vertex::label((next + i) as u64), *v);
                if i > 0 {
                    edges.push((next + i - 1, next + i));
                }
            }
            next += walk.len();
        }
        let source = FiniteGraph::from_labels(next, edges, false).unwrap();
        let r = non_onto_two_color(&source, &target, &phi).unwrap();
        let (comp, _) = source.components();
        for i in 0..next {
            for j in 0..next {
                if comp[i] == comp[j] {
                    prop_assert_eq!(r.m.contains(&source.vertex(i)), r.m.contains(&source.vertex(j)));
                }
            }
        }
        let restricted = source.induced(&r.m);
        prop_assert!(r.coloring.is_proper(&restricted));
    }

    #[test]
    fn complements_refine(c in odd_seq(4, 5), seed in any::<u64>()) {
        let n = c.len() - 1;
        let g = build_stage(&c, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = random_subset(&mut rng, &g, 0.2);
        let mut bigger = b.clone();
        bigger.extend(random_subset(&mut rng, &g, 0.2));
        let coarse = complement_components(&g, &b);
        for piece in complement_components(&g, &bigger) {
            prop_assert!(coarse.iter().any(|c| piece.iter().all(|i| c.contains(i))));
        }
    }

    #[test]
    fn mgs_formula_on_level_filtrations(c in odd_seq(5, 7)) {
        let big = c.len() - 1;
        let g = build_stage(&c, big).unwrap();
        for k in 1..=big {
            let expected = (k..=big).map(|i| c.values()[i] as usize + 1).min().unwrap();
            prop_assert_eq!(lzero_core::hom::mgs(&g, &levels_below(&g, k)), lzero_core::hom::Mgs::Size(expected));
        }
    }
}

/// Random path-forest extension instance: `L` is a path on `len` labels,
/// `B` a union of runs separated by gaps longer than the bound, and `phi`
/// walks in `L_{c,n}` along each run.
fn extension_instance(rng: &mut ChaCha8Rng, c: &OddSequence, n: usize) -> (FiniteGraph, BTreeSet<Vertex>, BTreeSet<Vertex>, PartialHom) {
    let bound = 2 * (c.stage_size(n + 1).unwrap() as usize - 1);
    let base = build_stage(c, n).unwrap();
    let mut edges = Vec::new();
    let mut b = BTreeSet::new();
    let mut phi = PartialHom::new();
    let mut next = 0usize;
    for _ in 0..rng.gen_range(1..=2) {
        let start = next;
        let runs = rng.gen_range(1..=3);
        let lead = if rng.gen_bool(0.5) { 0 } else { bound + 1 + rng.gen_range(0..3) };
        let mut pos = start + lead;
        let mut run_end = pos;
        for r in 0..runs {
            if r > 0 {
                pos = run_end + bound + 1 + rng.gen_range(0..4);
            }
            let from = rng.gen_range(0..base.vertex_count());
            let len = rng.gen_range(0..4);
            let walk = random_walk(rng, &base, from, len);
            for (i, v) in walk.iter().enumerate() {
                phi.insert(Vertex::label((pos + i) as u64), *v);
                b.insert(Vertex::label((pos + i) as u64));
            }
            run_end = pos + walk.len();
        }
        let trail = if rng.gen_bool(0.5) { 0 } else { bound + 1 + rng.gen_range(0..3) };
        let end = run_end + trail;
        for i in start + 1..end {
            edges.push((i - 1, i));
        }
        next = end;
    }
    let l = FiniteGraph::from_labels(next, edges, false).unwrap();
    let bp = l.vertices().iter().copied().collect();
    (l, b, bp, phi)
}

#[test]
fn extension_invariants() {
    let c: OddSequence = "1,1,3".parse().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..40 {
        let n = rng.gen_range(0..=1);
        let (l, b, bp, phi) = extension_instance(&mut rng, &c, n);
        let ext = extend_hom(&l, &b, &bp, &phi, &c, n).unwrap();
        let target = build_stage(&c, n + 1).unwrap();
        assert!(is_hom(&l, &target, &ext));
        for x in &b {
            assert_eq!(project(&c, n, n + 1, &ext.get(x).unwrap()).unwrap(), phi.get(x).unwrap());
        }
        for members in l.component_members() {
            let keep: BTreeSet<Vertex> = members.iter().map(|&i| l.vertex(i)).collect();
            let sub = l.induced(&keep);
            let local = extend_hom(&sub, &b.intersection(&keep).copied().collect(), &keep, &phi.restrict(&keep), &c, n).unwrap();
            assert_eq!(local, ext.restrict(&keep));
        }
    }
}

#[test]
fn generated_pairs_satisfy_their_checkers() {
    for k in 1..=6 {
        let b = gen_star(k, &GenStrategy::MinimalAllPlus).unwrap();
        assert!(check_star(&b).holds);
        for i in 0..k {
            let mut c = b.c().values().to_vec();
            if c[i] < 3 {
                continue;
            }
            c[i] -= 2;
            let smaller = OddPair::all_plus(OddSequence::new(c).unwrap());
            assert_eq!(check_star(&smaller).first_violation.map(|v| v.index), Some(i));
        }
        let f: Vec<u64> = (0..k).map(|i| 8 << i).collect();
        let g = gen_star(k, &GenStrategy::FForm(f.clone())).unwrap();
        let report = check_growth(&g, &f).unwrap();
        assert!(report.holds);
        // f(i) >= 8 * 2^i makes the f-form condition at least as strong as (*).
        assert!(check_star(&g).holds);
    }
}

/// `max_x |didist(x, s_i)|` over stage `i`, for each `i < depth`.
fn spreads(b: &OddPair, depth: usize) -> Vec<i64> {
    (0..depth)
        .map(|i| {
            let p = oriented_stage_path(b, i).unwrap();
            let s = special_vertex(b.c(), i).unwrap();
            p.order().iter().map(|x| p.didist(x, &s).unwrap().abs()).max().unwrap()
        })
        .collect()
}

fn star_pair(extra: Vec<u64>, flips: Vec<Vec<bool>>) -> OddPair {
    let mut sigmas: Vec<i64> = Vec::new();
    let mut c = Vec::new();
    let mut d = Vec::new();
    for (i, e) in extra.iter().enumerate() {
        let rhs = lzero_core::antibasis::star_bound(&sigmas, i);
        // Least odd length whose all-plus word clears the bound.
        let mut len = 1u64;
        while i128::from(len as i64 + 2) <= rhs {
            len += 2;
        }
        len += 2 * e;
        let mut word: Vec<i8> = vec![1; len as usize + 2];
        let mut sigma = len as i64 + 2;
        for (j, &f) in flips[i].iter().enumerate() {
            if f && j < word.len() && i128::from(sigma - 2) > rhs {
                word[j] = -1;
                sigma -= 2;
            }
        }
        sigmas.push(sigma);
        c.push(len);
        d.push(DirectionWord::new(word).unwrap());
    }
    OddPair::new(OddSequence::new(c).unwrap(), d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn star_pairs_meet_the_intervals(
        extra in prop::collection::vec(0u64..4, 3..=4),
        flips in prop::collection::vec(prop::collection::vec(prop::bool::weighted(0.2), 6), 4),
    ) {
        let b = star_pair(extra, flips);
        prop_assert!(check_star(&b).holds);
        let depth = b.len() - 1;
        let sig = b.sigma_profile();
        let spread = spreads(&b, depth);
        prop_assume!((0..depth).all(|i| i128::from(spread[i]) <= lzero_core::antibasis::raw_bound(&sig, i + 1) / 2));
        let t = vec![1u8; depth];
        let r = verify_interval(&b, &t, depth, IntervalMode::Tight).unwrap();
        prop_assert!(r.holds(), "{:?}", r.pairs.iter().find(|p| !p.ok()));
        for i in 0..depth {
            let mut t1 = vec![0u8; depth];
            t1[i] = 1;
            for j in 0..depth {
                if i == j {
                    continue;
                }
                let mut t2 = vec![0u8; depth];
                t2[j] = 1;
                let s = verify_separation(&b, &t1, &t2, depth).unwrap();
                prop_assert!(s.holds(), "{:?}", s);
            }
        }
    }
}

#[test]
fn stage_paths_enumerate_the_space() {
    let c: OddSequence = "3,1,5".parse().unwrap();
    for n in 0..3 {
        let p = stage_path(&c, n).unwrap();
        let mut order = p.order().to_vec();
        order.sort();
        assert_eq!(order, enumerate_space(&c, n).unwrap());
        assert_eq!(p.first(), zero_vertex(n));
        assert_eq!(p.last(), special_vertex(&c, n).unwrap());
    }
}

#[test]
fn parity_coloring_agrees_with_bipartiteness_on_forests() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..100 {
        let n = rng.gen_range(1..=30);
        let g = random_forest(&mut rng, n, 0.8, false);
        let a = random_subset(&mut rng, &g, 0.25);
        let dists: Vec<Vec<Option<usize>>> = (0..n).map(|i| g.bfs(i)).collect();
        let even = a.iter().all(|x| {
            a.iter().all(|y| dists[g.index_of(x).unwrap()][g.index_of(y).unwrap()].is_none_or(|d| d % 2 == 0))
        });
        assert_eq!(parity_two_color(&g, &a).unwrap().is_ok(), even);
    }
}
