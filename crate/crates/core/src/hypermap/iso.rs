//! Isomorphism of plane graphs through canonical face lists.
//!
//! A labeling is grown breadth-first from a start dart, visiting the darts
//! around each vertex in rotation order. The smallest relabeled face list
//! over all start darts is the oriented canonical form; the unoriented form
//! also tries the mirror image.

use serde::Serialize;

use super::graph::{hypermap_of, rotate_to_min, PlaneGraph, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Vec<u32>);

impl CanonicalForm {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

fn code_from(g: &PlaneGraph, labels: &[u32]) -> Vec<u32> {
    let mut faces: Vec<(Vec<u32>, bool)> = g
        .faces()
        .iter()
        .map(|f| {
            (
                rotate_to_min(&f.vertices.iter().map(|&v| labels[v as usize]).collect::<Vec<_>>()),
                f.is_final,
            )
        })
        .collect();
    faces.sort();
    let mut code = vec![g.vertex_count() as u32, faces.len() as u32];
    for (vs, fin) in faces {
        code.push(vs.len() as u32);
        code.push(u32::from(fin));
        code.extend(vs);
    }
    code
}

/// Canonical form up to orientation-preserving relabeling.
pub fn canonical_form_oriented(g: &PlaneGraph) -> CanonicalForm {
    let h = hypermap_of(g).expect("valid plane graph");
    let nv = g.vertex_count();
    let mut best: Option<Vec<u32>> = None;
    let mut labels = vec![u32::MAX; nv];
    let mut queue = Vec::with_capacity(nv);
    for start in 0..h.dart_count() {
        labels.fill(u32::MAX);
        queue.clear();
        let mut next = 0;
        labels[h.darts[start].0 as usize] = 0;
        next += 1;
        queue.push(start);
        let mut qi = 0;
        while qi < queue.len() {
            let first = queue[qi];
            qi += 1;
            let mut d = first;
            loop {
                let head = h.darts[d].1 as usize;
                if labels[head] == u32::MAX {
                    labels[head] = next;
                    next += 1;
                    queue.push(h.e[d]);
                }
                d = h.n[d];
                if d == first {
                    break;
                }
            }
        }
        let code = code_from(g, &labels);
        if best.as_ref().is_none_or(|b| code < *b) {
            best = Some(code);
        }
    }
    CanonicalForm(best.expect("at least one dart"))
}

/// Canonical form up to relabeling and mirror image.
pub fn canonical_form(g: &PlaneGraph) -> CanonicalForm {
    canonical_form_oriented(g).min(canonical_form_oriented(&g.reversed()))
}

/// True iff a vertex bijection maps the faces of `a` onto the faces of `b`,
/// or onto the reversed faces of `b`.
pub fn isomorphic(a: &PlaneGraph, b: &PlaneGraph) -> bool {
    fingerprint(a) == fingerprint(b) && canonical_form(a) == canonical_form(b)
}

pub fn isomorphic_oriented(a: &PlaneGraph, b: &PlaneGraph) -> bool {
    fingerprint(a) == fingerprint(b) && canonical_form_oriented(a) == canonical_form_oriented(b)
}

/// Cheap isomorphism invariants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub vertices: usize,
    pub edges: usize,
    pub face_sizes: Vec<usize>,
    pub degrees: Vec<usize>,
}

pub fn fingerprint(g: &PlaneGraph) -> Fingerprint {
    let mut degrees = g.degrees();
    degrees.sort_unstable();
    Fingerprint {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        face_sizes: g.face_sizes(),
        degrees,
    }
}

/// The graph relabeled by its canonical labeling, for stable output.
pub fn canonical_graph(g: &PlaneGraph) -> PlaneGraph {
    let code = canonical_form(g).0;
    let mut faces = Vec::new();
    let mut i = 2;
    while i < code.len() {
        let len = code[i] as usize;
        let fin = code[i + 1] == 1;
        let vs: Vec<Vertex> = code[i + 2..i + 2 + len].to_vec();
        faces.push(super::graph::Face::new(vs, fin));
        i += 2 + len;
    }
    PlaneGraph::from_parts_unchecked(faces, code[0] as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn octahedron() -> PlaneGraph {
        // 0 top, 5 bottom, equator 1 2 3 4
        PlaneGraph::from_final_faces(&[
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 1],
            vec![5, 2, 1],
            vec![5, 3, 2],
            vec![5, 4, 3],
            vec![5, 1, 4],
        ])
        .unwrap()
    }

    #[test]
    fn relabeled_octahedron() {
        let g = octahedron();
        let h = g.relabel(&[3, 0, 5, 1, 4, 2]).unwrap().with_face_moved(2, 1, 6);
        assert!(isomorphic(&g, &h));
        assert_eq!(canonical_graph(&g), canonical_graph(&h));
    }

    #[test]
    fn seeds_differ() {
        let tri = PlaneGraph::from_final_faces(&[vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        let sq = PlaneGraph::from_final_faces(&[vec![0, 1, 2, 3], vec![3, 2, 1, 0]]).unwrap();
        assert!(!isomorphic(&tri, &sq));
    }

    #[test]
    fn mirror_images() {
        use crate::hypermap::{enumerate, Limits, Successors};
        let mut chiral = 0;
        for p in 0..3 {
            for g in enumerate(p, Successors::Plane, Limits::vertices(7)).graphs {
                let r = g.reversed();
                assert!(isomorphic(&g, &r));
                chiral += usize::from(!isomorphic_oriented(&g, &r));
            }
        }
        assert!(chiral > 0);
    }

    #[test]
    fn canonical_graph_is_valid() {
        let g = canonical_graph(&octahedron());
        assert!(PlaneGraph::new(g.faces().to_vec()).is_ok());
    }
}
