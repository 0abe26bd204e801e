mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use rigorkit::hypermap::*;

use common::graphs::{perturb, plane_graphs, sample, triangles_are_faces};

fn classes(gs: &[PlaneGraph]) -> BTreeSet<CanonicalForm> {
    gs.iter().map(canonical_form).collect()
}

#[test]
fn plane_enumeration_matches_brute_force() {
    // Triangulations of the sphere on 3, 4, 5, 6 vertices: 1, 1, 1, 2.
    assert_eq!(plane_graphs(3, 6).len(), 5);
    for (p, n) in [(0u32, 6usize), (1, 5), (2, 5)] {
        let e = enumerate(p, Successors::Plane, Limits::vertices(n));
        let got = classes(&e.graphs);
        let want = plane_graphs(p as usize + 3, n);
        assert_eq!(got, want, "p = {p}, n <= {n}");
    }
}

#[test]
fn parameters_give_disjoint_sets() {
    let a = classes(&enumerate(0, Successors::Plane, Limits::vertices(7)).graphs);
    let b = classes(&enumerate(1, Successors::Plane, Limits::vertices(7)).graphs);
    assert!(!a.is_empty() && !b.is_empty());
    assert!(a.is_disjoint(&b));
}

#[test]
fn tame_enumeration_is_sound_and_complete() {
    let pred = FaceSizeBaseline;
    for (p, n) in [(0u32, 8usize), (1, 7), (2, 7)] {
        let plane = enumerate(p, Successors::Plane, Limits::vertices(n)).graphs;
        let tame = classes(&enumerate(p, Successors::Tame(&pred), Limits::vertices(n)).graphs);
        let all = classes(&plane);
        assert!(tame.is_subset(&all), "p = {p}");
        let needed: BTreeSet<_> = plane
            .iter()
            .filter(|g| triangles_are_faces(g) && pred.is_tame(g))
            .map(canonical_form)
            .collect();
        assert!(needed.is_subset(&tame), "p = {p}");
    }
}

/// Independent count of one-step splits: choose the interior boundary
/// positions, then distribute fresh vertices over the gaps.
fn split_count(g: &PlaneGraph, p: u32) -> usize {
    let fi = anchor_face(g).unwrap();
    let f = &g.faces()[fi].vertices;
    let m = f.len();
    let s = (0..m).min_by_key(|&i| f[i]).unwrap();
    let vs: Vec<u32> = (0..m).map(|k| f[(s + k) % m]).collect();
    let max = p as usize + 3;
    let mut count = 0;
    for mask in 0u32..(1 << (m - 2)) {
        let mut chosen = vec![0];
        chosen.extend((1..m - 1).filter(|i| mask >> (i - 1) & 1 == 1));
        chosen.push(m - 1);
        let gaps = chosen.len() - 1;
        if chosen.len() > max {
            continue;
        }
        // fresh counts per gap with total <= max - chosen.len()
        let budget = max - chosen.len();
        let mut c = vec![0usize; gaps];
        loop {
            let total: usize = c.iter().sum();
            if total <= budget && chosen.len() + total >= 3 {
                let dup = (0..gaps).any(|k| {
                    c[k] == 0 && chosen[k + 1] > chosen[k] + 1 && g.has_edge(vs[chosen[k]], vs[chosen[k + 1]])
                });
                count += usize::from(!dup);
            }
            let mut k = 0;
            while k < gaps {
                c[k] += 1;
                if c[k] <= budget {
                    break;
                }
                c[k] = 0;
                k += 1;
            }
            if k == gaps {
                break;
            }
        }
    }
    count
}

#[test]
fn successor_counts_match_split_oracle() {
    assert_eq!(next_plane(&seed(0), 0).unwrap().len(), split_count(&seed(0), 0));
    for p in 0..4 {
        for v in Walk::new(p, Successors::Plane, Limits::vertices(8)).take(400) {
            if !v.graph.is_final() {
                assert_eq!(
                    next_plane(&v.graph, p).unwrap().len(),
                    split_count(&v.graph, p),
                    "{}",
                    v.graph
                );
            }
        }
    }
}

#[test]
fn only_triangle_face_finalizes_among_successors() {
    // After one split of Seed_0 with a chord-free triangle left over.
    let g = PlaneGraph::new(vec![Face::new(vec![0, 1, 2], true), Face::new(vec![2, 1, 0], false)]).unwrap();
    let succ = next_plane(&g, 0).unwrap();
    assert!(succ.iter().any(|h| h.is_final() && h.face_count() == 2));
}

#[test]
fn successors_add_exactly_one_final_face() {
    for p in 0..4 {
        for v in Walk::new(p, Successors::Plane, Limits::vertices(7)).take(300) {
            let g = &v.graph;
            if g.is_final() {
                continue;
            }
            let fi = anchor_face(g).unwrap();
            let old_final: Vec<&Face> = g.faces().iter().filter(|f| f.is_final).collect();
            for h in next_plane(g, p).unwrap() {
                assert!(PlaneGraph::new(h.faces().to_vec()).is_ok(), "{h}");
                assert!(h.vertex_count() >= g.vertex_count());
                let new_final = h.faces().iter().filter(|f| f.is_final).count();
                assert_eq!(new_final, old_final.len() + 1);
                for f in &old_final {
                    assert!(h.faces().contains(f));
                }
                for (i, f) in g.faces().iter().enumerate() {
                    assert!(i == fi || h.faces().contains(f));
                }
                let newest = &h.faces()[fi];
                assert!(newest.is_final && newest.len() <= p as usize + 3);
                assert!(h.edge_count() >= g.edge_count());
            }
        }
    }
}

#[test]
fn enumeration_is_deterministic() {
    let pred = FaceSizeBaseline;
    let a = enumerate(1, Successors::Tame(&pred), Limits::vertices(7));
    let b = enumerate(1, Successors::Tame(&pred), Limits::vertices(7));
    assert_eq!(a.graphs, b.graphs);
    assert_eq!(a.visited, b.visited);
}

#[test]
fn octahedron_labelings_against_bijection_search() {
    let oct = vec![
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 3, 4],
        vec![0, 4, 1],
        vec![5, 2, 1],
        vec![5, 3, 2],
        vec![5, 4, 3],
        vec![5, 1, 4],
    ];
    let a = PlaneGraph::from_final_faces(&oct).unwrap();
    let b = a.relabel(&[4, 2, 0, 5, 1, 3]).unwrap();
    let others = enumerate(0, Successors::Plane, Limits::vertices(6)).graphs;
    let norm = |g: &PlaneGraph| -> BTreeSet<Vec<u32>> { g.faces().iter().map(|f| f.normalized()).collect() };
    let brute = |x: &PlaneGraph, y: &PlaneGraph| -> bool {
        if x.vertex_count() != y.vertex_count() || x.face_count() != y.face_count() {
            return false;
        }
        let n = x.vertex_count() as u32;
        let target = norm(y);
        let target_rev = norm(&y.reversed());
        let mut perm: Vec<u32> = (0..n).collect();
        loop {
            let img = norm(&x.relabel(&perm).unwrap());
            if img == target || img == target_rev {
                return true;
            }
            // next lexicographic permutation
            let Some(i) = (0..perm.len() - 1).rev().find(|&i| perm[i] < perm[i + 1]) else {
                return false;
            };
            let j = (i + 1..perm.len()).rev().find(|&j| perm[j] > perm[i]).unwrap();
            perm.swap(i, j);
            perm[i + 1..].reverse();
        }
    };
    assert!(brute(&a, &b) && isomorphic(&a, &b));
    for g in &others {
        assert_eq!(isomorphic(&a, g), brute(&a, g), "{g}");
    }
    for x in others.iter().take(12) {
        for y in others.iter().take(12) {
            assert_eq!(isomorphic(x, y), brute(x, y), "{x} vs {y}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn iso_invariant_under_relabel_and_rotation(i in 0usize..1000, s in any::<u64>()) {
        let gs = sample();
        let g = &gs[i % gs.len()];
        prop_assert!(isomorphic(g, &perturb(g, s)));
    }

    #[test]
    fn iso_is_an_equivalence(i in 0usize..1000, j in 0usize..1000, k in 0usize..1000, s in any::<u64>()) {
        let gs = sample();
        let (a, b, c) = (&gs[i % gs.len()], &gs[j % gs.len()], &gs[k % gs.len()]);
        prop_assert!(isomorphic(a, a));
        prop_assert_eq!(isomorphic(a, b), isomorphic(b, a));
        let b2 = perturb(b, s);
        if isomorphic(a, b) && isomorphic(&b2, c) {
            prop_assert!(isomorphic(a, c));
        }
    }

    #[test]
    fn finalization_is_idempotent(p in 0u32..4, n in 0usize..300) {
        let v = Walk::new(p, Successors::Plane, Limits::vertices(7)).nth(n);
        if let Some(v) = v {
            let once = finalize_triangles(&v.graph);
            prop_assert_eq!(finalize_triangles(&once), once);
        }
    }
}

#[test]
fn every_visited_graph_is_a_planar_hypermap() {
    let pred = FaceSizeBaseline;
    for p in 0..6 {
        for succ in [Successors::Plane, Successors::Tame(&pred)] {
            for v in Walk::new(p, succ, Limits::vertices(8)).take(500) {
                let h = hypermap_of(&v.graph).unwrap();
                assert!(h.is_valid(), "{}", v.graph);
                assert_eq!(h.euler_characteristic(), 2, "{}", v.graph);
            }
        }
    }
}
