//! Plane graphs as oriented face lists and their hypermap view.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::HypermapError;

pub type Vertex = u32;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Face {
    pub vertices: Vec<Vertex>,
    #[serde(rename = "final")]
    pub is_final: bool,
}

impl Face {
    pub fn new(vertices: Vec<Vertex>, is_final: bool) -> Face {
        Face { vertices, is_final }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Directed boundary edges in face order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// The face rotated so it starts at its smallest vertex.
    pub fn normalized(&self) -> Vec<Vertex> {
        rotate_to_min(&self.vertices)
    }
}

pub(crate) fn rotate_to_min(vs: &[Vertex]) -> Vec<Vertex> {
    let k = (0..vs.len()).min_by_key(|&i| vs[i]).unwrap_or(0);
    vs[k..].iter().chain(&vs[..k]).copied().collect()
}

/// A connected plane graph given by its oriented face boundaries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Face>", into = "Vec<Face>")]
pub struct PlaneGraph {
    faces: Vec<Face>,
    vertex_count: usize,
}

impl TryFrom<Vec<Face>> for PlaneGraph {
    type Error = HypermapError;
    fn try_from(faces: Vec<Face>) -> Result<Self, HypermapError> {
        PlaneGraph::new(faces)
    }
}

impl From<PlaneGraph> for Vec<Face> {
    fn from(g: PlaneGraph) -> Vec<Face> {
        g.faces
    }
}

impl PlaneGraph {
    /// Checks the face structure: at least two faces, each of length ≥ 3 with
    /// distinct vertices, every directed edge in exactly one face together with
    /// its reverse, dense vertex ids, a connected edge graph and Euler
    /// characteristic 2.
    pub fn new(faces: Vec<Face>) -> Result<PlaneGraph, HypermapError> {
        let bad = |m: String| Err(HypermapError::Malformed(m));
        if faces.len() < 2 {
            return bad(format!("{} face(s); need at least 2", faces.len()));
        }
        let mut seen = HashMap::new();
        let mut verts = BTreeSet::new();
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return bad(format!("face {i} has {} vertices", f.len()));
            }
            if f.vertices.iter().collect::<BTreeSet<_>>().len() != f.len() {
                return bad(format!("face {i} repeats a vertex"));
            }
            verts.extend(f.vertices.iter().copied());
            for e in f.edges() {
                if let Some(j) = seen.insert(e, i) {
                    return bad(format!("edge {e:?} in faces {j} and {i}"));
                }
            }
        }
        for &(u, v) in seen.keys() {
            if !seen.contains_key(&(v, u)) {
                return bad(format!("edge ({u}, {v}) has no reverse"));
            }
        }
        let n = verts.len();
        if verts.iter().next_back().map_or(0, |&m| m as usize + 1) != n {
            return bad("vertex ids are not 0..V-1".into());
        }
        // Union-find over the edges for connectivity.
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(u, v) in seen.keys() {
            let (a, b) = (root(&mut parent, u as usize), root(&mut parent, v as usize));
            parent[a] = b;
        }
        let r = root(&mut parent, 0);
        if (0..n).any(|x| root(&mut parent, x) != r) {
            return bad("graph is not connected".into());
        }
        let chi = n as i64 - (seen.len() / 2) as i64 + faces.len() as i64;
        if chi != 2 {
            return bad(format!("V - E + F = {chi}; the faces do not tile a sphere"));
        }
        Ok(PlaneGraph { faces, vertex_count: n })
    }

    pub(crate) fn from_parts_unchecked(faces: Vec<Face>, vertex_count: usize) -> PlaneGraph {
        PlaneGraph { faces, vertex_count }
    }

    /// Convenience constructor with every face final.
    pub fn from_final_faces(faces: &[Vec<Vertex>]) -> Result<PlaneGraph, HypermapError> {
        PlaneGraph::new(faces.iter().map(|f| Face::new(f.clone(), true)).collect())
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.faces.iter().map(Face::len).sum::<usize>() / 2
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn is_final(&self) -> bool {
        self.faces.iter().all(|f| f.is_final)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.faces.iter().any(|f| f.edges().any(|e| e == (u, v)))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count];
        for f in &self.faces {
            for &v in &f.vertices {
                d[v as usize] += 1;
            }
        }
        d
    }

    /// Sizes of faces, ascending.
    pub fn face_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.faces.iter().map(Face::len).collect();
        s.sort_unstable();
        s
    }

    /// Every face reversed, which mirrors the embedding.
    pub fn reversed(&self) -> PlaneGraph {
        let faces = self
            .faces
            .iter()
            .map(|f| Face::new(f.vertices.iter().rev().copied().collect(), f.is_final))
            .collect();
        PlaneGraph::from_parts_unchecked(faces, self.vertex_count)
    }

    /// Apply a vertex bijection `v ↦ perm[v]`.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<PlaneGraph, HypermapError> {
        if perm.len() != self.vertex_count
            || perm.iter().collect::<BTreeSet<_>>().len() != perm.len()
            || perm.iter().any(|&v| v as usize >= perm.len())
        {
            return Err(HypermapError::Malformed("relabeling is not a permutation".into()));
        }
        let faces = self
            .faces
            .iter()
            .map(|f| Face::new(f.vertices.iter().map(|&v| perm[v as usize]).collect(), f.is_final))
            .collect();
        Ok(PlaneGraph::from_parts_unchecked(faces, self.vertex_count))
    }

    /// Rotate face `i` by `k` positions and move it to position `to`; the
    /// graph is unchanged as a face set.
    pub fn with_face_moved(&self, i: usize, k: usize, to: usize) -> PlaneGraph {
        let mut faces = self.faces.clone();
        let mut f = faces.remove(i);
        let n = f.len();
        f.vertices.rotate_left(k % n);
        faces.insert(to.min(faces.len()), f);
        PlaneGraph::from_parts_unchecked(faces, self.vertex_count)
    }
}

impl fmt::Display for PlaneGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, face) in self.faces.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let vs: Vec<String> = face.vertices.iter().map(u32::to_string).collect();
            write!(f, "[{}]{}", vs.join(","), if face.is_final { "" } else { "*" })?;
        }
        Ok(())
    }
}

/// Three permutations of darts `0..D` with `e∘n∘f = id`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypermap {
    /// Dart `d` is the directed edge `darts[d]`.
    pub darts: Vec<(Vertex, Vertex)>,
    pub e: Vec<usize>,
    pub n: Vec<usize>,
    pub f: Vec<usize>,
}

/// Darts are directed edges; `f` steps along a face, `e` reverses an edge and
/// `n = e∘f⁻¹` turns around the dart's tail.
pub fn hypermap_of(g: &PlaneGraph) -> Result<Hypermap, HypermapError> {
    let mut darts = Vec::new();
    let mut index = HashMap::new();
    let mut f = Vec::new();
    for face in g.faces() {
        let start = darts.len();
        let k = face.len();
        for (j, e) in face.edges().enumerate() {
            if index.insert(e, darts.len()).is_some() {
                return Err(HypermapError::Malformed(format!("edge {e:?} repeated")));
            }
            darts.push(e);
            f.push(start + (j + 1) % k);
        }
    }
    let e = darts
        .iter()
        .map(|&(u, v)| {
            index
                .get(&(v, u))
                .copied()
                .ok_or_else(|| HypermapError::Malformed(format!("edge ({u}, {v}) has no reverse")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut f_inv = vec![0; f.len()];
    for (d, &x) in f.iter().enumerate() {
        f_inv[x] = d;
    }
    let n = (0..darts.len()).map(|d| e[f_inv[d]]).collect();
    Ok(Hypermap { darts, e, n, f })
}

impl Hypermap {
    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    /// Every violated invariant, empty when the hypermap is valid.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let d = self.darts.len();
        for (name, p) in [("e", &self.e), ("n", &self.n), ("f", &self.f)] {
            if !is_permutation(p) || p.len() != d {
                out.push(format!("{name} is not a permutation of {d} darts"));
            }
        }
        if !out.is_empty() {
            return out;
        }
        for x in 0..d {
            if self.e[self.n[self.f[x]]] != x {
                out.push(format!("e∘n∘f moves dart {x}"));
            }
            if self.e[x] == x {
                out.push(format!("e fixes dart {x}"));
            }
            if self.e[self.e[x]] != x {
                out.push(format!("e is not an involution at dart {x}"));
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// `#n-cycles − #e-cycles + #f-cycles`, i.e. `V − E + F`.
    pub fn euler_characteristic(&self) -> i64 {
        cycle_count(&self.n) as i64 - cycle_count(&self.e) as i64 + cycle_count(&self.f) as i64
    }
}

pub fn euler_characteristic(h: &Hypermap) -> i64 {
    h.euler_characteristic()
}

fn is_permutation(p: &[usize]) -> bool {
    let mut hit = vec![false; p.len()];
    for &x in p {
        if x >= p.len() || std::mem::replace(&mut hit[x], true) {
            return false;
        }
    }
    true
}

pub fn cycle_count(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut count = 0;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        count += 1;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
        }
    }
    count
}
