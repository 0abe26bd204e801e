//! Brute-force plane graph generator: every simple graph on `n` labeled
//! vertices (degrees sorted so each class is hit at least once), every
//! rotation system, faces traced from darts, genus 0 kept.

use std::collections::BTreeSet;

use rigorkit::hypermap::{canonical_form, enumerate, CanonicalForm, Limits, PlaneGraph, Successors};

fn permutations(items: &[u32]) -> Vec<Vec<u32>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Faces of the embedding given by `rot[v]` (cyclic neighbor order at `v`).
fn trace_faces(rot: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let n = rot.len();
    let mut used = vec![Vec::new(); n];
    for v in 0..n {
        used[v] = vec![false; rot[v].len()];
    }
    let mut faces = Vec::new();
    for u in 0..n {
        for k in 0..rot[u].len() {
            if used[u][k] {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut i) = (u, k);
            while !used[a][i] {
                used[a][i] = true;
                face.push(a as u32);
                let b = rot[a][i] as usize;
                // Next dart leaves b right after the edge back to a.
                let j = rot[b].iter().position(|&x| x as usize == a).unwrap();
                a = b;
                i = (j + 1) % rot[b].len();
            }
            faces.push(face);
        }
    }
    faces
}

fn connected(n: usize, edges: &[(u32, u32)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            let (a, b) = (a as usize, b as usize);
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Canonical forms of all plane graphs with 3..=max_n vertices whose faces
/// are simple cycles of length 3..=k and at least one face has length k.
pub fn plane_graphs(k: usize, max_n: usize) -> BTreeSet<CanonicalForm> {
    let mut out = BTreeSet::new();
    for n in 3..=max_n {
        let pairs: Vec<(u32, u32)> = (0..n as u32)
            .flat_map(|a| (a + 1..n as u32).map(move |b| (a, b)))
            .collect();
        let max_e = 3 * n - 6;
        let max_e = max_e.max(3);
        for mask in 0u32..(1 << pairs.len()) {
            let e = mask.count_ones() as usize;
            if e < n || e > max_e {
                continue;
            }
            let edges: Vec<(u32, u32)> = (0..pairs.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| pairs[i])
                .collect();
            let mut nbrs = vec![Vec::new(); n];
            for &(a, b) in &edges {
                nbrs[a as usize].push(b);
                nbrs[b as usize].push(a);
            }
            if nbrs.windows(2).any(|w| w[0].len() < w[1].len()) || nbrs[n - 1].len() < 2 || !connected(n, &edges) {
                continue;
            }
            // Euler: F = E − n + 2 faces with sizes in 3..=k.
            let f = e + 2 - n;
            if 2 * e < 3 * f || 2 * e > k * f {
                continue;
            }
            let choices: Vec<Vec<Vec<u32>>> = nbrs
                .iter()
                .map(|ns| {
                    permutations(&ns[1..])
                        .into_iter()
                        .map(|mut p| {
                            p.insert(0, ns[0]);
                            p
                        })
                        .collect()
                })
                .collect();
            let mut idx = vec![0usize; n];
            loop {
                let rot: Vec<Vec<u32>> = (0..n).map(|v| choices[v][idx[v]].clone()).collect();
                let faces = trace_faces(&rot);
                let simple = faces
                    .iter()
                    .all(|fc| fc.iter().collect::<BTreeSet<_>>().len() == fc.len());
                if faces.len() == f
                    && simple
                    && faces.iter().all(|fc| (3..=k).contains(&fc.len()))
                    && faces.iter().any(|fc| fc.len() == k)
                {
                    let g = PlaneGraph::from_final_faces(&faces).expect("traced faces are valid");
                    out.insert(canonical_form(&g));
                }
                // mixed-radix increment
                let mut v = 0;
                while v < n {
                    idx[v] += 1;
                    if idx[v] < choices[v].len() {
                        break;
                    }
                    idx[v] = 0;
                    v += 1;
                }
                if v == n {
                    break;
                }
            }
        }
    }
    out
}

/// Every 3-cycle of the graph bounds a face.
pub fn triangles_are_faces(g: &PlaneGraph) -> bool {
    let n = g.vertex_count() as u32;
    let faces: BTreeSet<Vec<u32>> = g
        .faces()
        .iter()
        .filter(|f| f.len() == 3)
        .map(|f| {
            let mut v = f.vertices.clone();
            v.sort_unstable();
            v
        })
        .collect();
    let adj = |a: u32, b: u32| g.has_edge(a, b);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if adj(a, b) && adj(b, c) && adj(a, c) && !faces.contains(&vec![a, b, c]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Final plane graphs for p = 0, 1, 2 at small sizes.
pub fn sample() -> Vec<PlaneGraph> {
    let mut out = enumerate(0, Successors::Plane, Limits::vertices(7)).graphs;
    out.extend(enumerate(1, Successors::Plane, Limits::vertices(6)).graphs);
    out.extend(enumerate(2, Successors::Plane, Limits::vertices(6)).graphs);
    out
}

/// Random relabeling, face rotations and possibly a mirror image of `g`.
pub fn perturb(g: &PlaneGraph, seed: u64) -> PlaneGraph {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let mut perm: Vec<u32> = (0..g.vertex_count() as u32).collect();
    perm.shuffle(&mut rng);
    let mut h = g.relabel(&perm).unwrap();
    for _ in 0..4 {
        let i = rng.gen_range(0..h.face_count());
        let k = rng.gen_range(0..8);
        let to = rng.gen_range(0..h.face_count());
        h = h.with_face_moved(i, k, to);
    }
    if rng.gen_bool(0.5) {
        h = h.reversed();
    }
    h
}
