//! Seed graphs, one-face subdivision steps and exhaustive enumeration.

use rayon::prelude::*;
use serde::Serialize;

use super::graph::{Face, PlaneGraph, Vertex};
use super::HypermapError;

/// Two `(p+3)`-gons on the same cycle: the outer one final, its reverse not.
pub fn seed(p: u32) -> PlaneGraph {
    let k = p + 3;
    let outer: Vec<Vertex> = (0..k).collect();
    let inner: Vec<Vertex> = outer.iter().rev().copied().collect();
    PlaneGraph::from_parts_unchecked(vec![Face::new(outer, true), Face::new(inner, false)], k as usize)
}

/// Index of the non-final face that the next step subdivides: smallest size,
/// then smallest position.
pub fn anchor_face(g: &PlaneGraph) -> Option<usize> {
    g.faces()
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_final)
        .min_by_key(|(i, f)| (f.len(), *i))
        .map(|(i, _)| i)
}

/// Nondecreasing index lists `0, s.., m−1` of length `size` with the middle
/// entries in `0..=m−2`. A repeated index stands for a new vertex.
fn index_lists(size: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = vec![0];
    fn go(cur: &mut Vec<usize>, left: usize, hi: usize, m: usize, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            let mut l = cur.clone();
            l.push(m - 1);
            out.push(l);
            return;
        }
        let from = *cur.last().expect("starts with 0");
        for x in from..=hi {
            cur.push(x);
            go(cur, left - 1, hi, m, out);
            cur.pop();
        }
    }
    go(&mut cur, size - 2, m - 2, m, &mut out);
    out
}

/// Every way to cut one final face of size `3..=p+3` off the anchor face.
///
/// The face `[v0, .., v(m−1)]` is rotated to start at its smallest vertex.
/// The new face always keeps the boundary edge `v(m−1) → v0`, visits the
/// chosen boundary vertices in face order and inserts fresh vertices between
/// them. Each stretch of boundary it skips becomes a non-final face. A chord
/// that would duplicate an existing edge is skipped.
pub fn next_plane(g: &PlaneGraph, p: u32) -> Result<Vec<PlaneGraph>, HypermapError> {
    let Some(fi) = anchor_face(g) else {
        return Err(HypermapError::FinalGraph);
    };
    let f = &g.faces()[fi];
    let m = f.len();
    let start = (0..m).min_by_key(|&i| f.vertices[i]).expect("nonempty face");
    let vs: Vec<Vertex> = (0..m).map(|k| f.vertices[(start + k) % m]).collect();
    let mut out = Vec::new();
    for size in 3..=(p as usize + 3) {
        for is in index_lists(size, m) {
            if let Some(h) = subdivide(g, fi, &vs, &is) {
                out.push(h);
            }
        }
    }
    Ok(out)
}

fn subdivide(g: &PlaneGraph, fi: usize, vs: &[Vertex], is: &[usize]) -> Option<PlaneGraph> {
    let mut next_id = g.vertex_count() as Vertex;
    let mut new_face = vec![vs[0]];
    let mut pieces = Vec::new();
    let mut fresh: Vec<Vertex> = Vec::new();
    let mut prev = 0;
    for &i in &is[1..] {
        if i == prev {
            fresh.push(next_id);
            new_face.push(next_id);
            next_id += 1;
            continue;
        }
        let (a, b) = (vs[prev], vs[i]);
        if fresh.is_empty() && i == prev + 1 {
            // Shared boundary edge.
        } else {
            if fresh.is_empty() && g.has_edge(a, b) {
                return None;
            }
            let mut piece: Vec<Vertex> = vs[prev..=i].to_vec();
            piece.extend(fresh.iter().rev());
            pieces.push(Face::new(piece, false));
        }
        fresh.clear();
        new_face.push(b);
        prev = i;
    }
    let mut faces = g.faces().to_vec();
    faces[fi] = Face::new(new_face, true);
    faces.extend(pieces);
    Some(PlaneGraph::from_parts_unchecked(faces, next_id as usize))
}

/// A pluggable tameness test on final graphs with an optional pruning hook.
pub trait TamenessPredicate: Sync {
    fn name(&self) -> &str;
    fn is_tame(&self, g: &PlaneGraph) -> bool;
    /// True when no final graph reachable from `g` can be tame.
    fn prune(&self, _g: &PlaneGraph) -> bool {
        false
    }
}

/// Faces of size 3 to 8 only.
#[derive(Debug, Clone, Copy, Default)]
pub struct FaceSizeBaseline;

impl TamenessPredicate for FaceSizeBaseline {
    fn name(&self) -> &str {
        "face-size-3-8"
    }
    fn is_tame(&self, g: &PlaneGraph) -> bool {
        g.faces().iter().all(|f| (3..=8).contains(&f.len()))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysTame;

impl TamenessPredicate for AlwaysTame {
    fn name(&self) -> &str {
        "always"
    }
    fn is_tame(&self, _g: &PlaneGraph) -> bool {
        true
    }
}

/// Mark every non-final triangle final.
pub fn finalize_triangles(g: &PlaneGraph) -> PlaneGraph {
    let faces = g
        .faces()
        .iter()
        .map(|f| Face::new(f.vertices.clone(), f.is_final || f.len() == 3))
        .collect();
    PlaneGraph::from_parts_unchecked(faces, g.vertex_count())
}

/// [`next_plane`] followed by pruning, triangle finalization and removal of
/// final graphs that fail `pred`.
pub fn next_tame(g: &PlaneGraph, p: u32, pred: &dyn TamenessPredicate) -> Result<Vec<PlaneGraph>, HypermapError> {
    Ok(next_plane(g, p)?
        .into_iter()
        .filter(|h| !pred.prune(h))
        .map(|h| finalize_triangles(&h))
        .filter(|h| !h.is_final() || pred.is_tame(h))
        .collect())
}

#[derive(Clone, Copy)]
pub enum Successors<'a> {
    Plane,
    Tame(&'a dyn TamenessPredicate),
}

impl Successors<'_> {
    pub fn apply(&self, g: &PlaneGraph, p: u32) -> Result<Vec<PlaneGraph>, HypermapError> {
        match self {
            Successors::Plane => next_plane(g, p),
            Successors::Tame(pred) => next_tame(g, p, *pred),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub max_vertices: usize,
    pub max_graphs: usize,
    pub max_depth: usize,
}

impl Limits {
    pub fn vertices(max_vertices: usize) -> Limits {
        Limits {
            max_vertices,
            max_graphs: usize::MAX,
            max_depth: usize::MAX,
        }
    }
}

/// How often each limit cut the search.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LimitHits {
    pub vertices: usize,
    pub depth: usize,
    pub graphs: bool,
}

impl LimitHits {
    pub fn any(&self) -> bool {
        self.vertices > 0 || self.depth > 0 || self.graphs
    }
}

/// One graph met during the search.
#[derive(Debug, Clone)]
pub struct Visit {
    pub graph: PlaneGraph,
    pub depth: usize,
}

/// Depth-first walk from the seed, yielding every graph visited (final or
/// not) in a fixed order. Successors beyond `max_vertices` or `max_depth`
/// are counted in [`LimitHits`] and skipped.
pub struct Walk<'a> {
    p: u32,
    succ: Successors<'a>,
    limits: Limits,
    stack: Vec<(PlaneGraph, usize)>,
    emitted_final: usize,
    pub hits: LimitHits,
}

impl<'a> Walk<'a> {
    pub fn new(p: u32, succ: Successors<'a>, limits: Limits) -> Walk<'a> {
        Walk::from_roots(p, succ, limits, vec![(seed(p), 0)])
    }

    fn from_roots(p: u32, succ: Successors<'a>, limits: Limits, roots: Vec<(PlaneGraph, usize)>) -> Walk<'a> {
        let mut stack = roots;
        stack.reverse();
        Walk {
            p,
            succ,
            limits,
            stack,
            emitted_final: 0,
            hits: LimitHits::default(),
        }
    }
}

impl Iterator for Walk<'_> {
    type Item = Visit;

    fn next(&mut self) -> Option<Visit> {
        if self.emitted_final >= self.limits.max_graphs {
            self.hits.graphs |= !self.stack.is_empty();
            return None;
        }
        let (g, depth) = self.stack.pop()?;
        if g.is_final() {
            self.emitted_final += 1;
        } else if depth >= self.limits.max_depth {
            self.hits.depth += 1;
        } else {
            let succ = self.succ.apply(&g, self.p).expect("graph is not final");
            for h in succ.into_iter().rev() {
                if h.vertex_count() > self.limits.max_vertices {
                    self.hits.vertices += 1;
                } else {
                    self.stack.push((h, depth + 1));
                }
            }
        }
        Some(Visit { graph: g, depth })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Enumeration {
    pub p: u32,
    pub limits: Limits,
    /// Final graphs in emission order.
    pub graphs: Vec<PlaneGraph>,
    pub visited: usize,
    pub hits: LimitHits,
}

/// Final graphs reachable from `Seed_p`, sequentially.
pub fn enumerate(p: u32, succ: Successors<'_>, limits: Limits) -> Enumeration {
    let mut walk = Walk::new(p, succ, limits);
    let mut graphs = Vec::new();
    let mut visited = 0;
    for v in walk.by_ref() {
        visited += 1;
        if v.graph.is_final() {
            graphs.push(v.graph);
        }
    }
    Enumeration {
        p,
        limits,
        graphs,
        visited,
        hits: walk.hits,
    }
}

/// Same result as [`enumerate`], with the frontier split across the rayon
/// pool. The frontier is grown breadth-first until it has `width` entries,
/// then each subtree is walked independently and the outputs concatenated in
/// frontier order. With a finite `max_graphs` the sequential walk is used.
pub fn enumerate_parallel(p: u32, succ: Successors<'_>, limits: Limits, width: usize) -> Enumeration {
    if limits.max_graphs != usize::MAX {
        return enumerate(p, succ, limits);
    }
    // Each frontier entry is either a finished visit or a subtree root; the
    // preorder of the sequential walk is preserved by expanding in place.
    enum Item {
        Done(PlaneGraph),
        Open(PlaneGraph, usize),
    }
    let mut frontier = vec![Item::Open(seed(p), 0)];
    let mut hits = LimitHits::default();
    let mut visited = 0;
    loop {
        let open = frontier.iter().filter(|x| matches!(x, Item::Open(..))).count();
        if open == 0 || open >= width {
            break;
        }
        let mut grown = Vec::with_capacity(frontier.len() * 2);
        let mut expanded = false;
        for item in frontier {
            match item {
                Item::Open(g, depth) if !g.is_final() && depth < limits.max_depth => {
                    expanded = true;
                    visited += 1;
                    let succ_list = succ.apply(&g, p).expect("graph is not final");
                    grown.push(Item::Done(g));
                    for h in succ_list {
                        if h.vertex_count() > limits.max_vertices {
                            hits.vertices += 1;
                        } else {
                            grown.push(Item::Open(h, depth + 1));
                        }
                    }
                }
                other => grown.push(other),
            }
        }
        frontier = grown;
        if !expanded {
            break;
        }
    }
    let parts: Vec<(Vec<PlaneGraph>, usize, LimitHits)> = frontier
        .into_par_iter()
        .map(|item| match item {
            Item::Done(g) => (if g.is_final() { vec![g] } else { vec![] }, 0, LimitHits::default()),
            Item::Open(g, depth) => {
                let mut walk = Walk::from_roots(p, succ, limits, vec![(g, depth)]);
                let mut out = Vec::new();
                let mut n = 0;
                for v in walk.by_ref() {
                    n += 1;
                    if v.graph.is_final() {
                        out.push(v.graph);
                    }
                }
                (out, n, walk.hits)
            }
        })
        .collect();
    let mut graphs = Vec::new();
    for (gs, n, h) in parts {
        graphs.extend(gs);
        visited += n;
        hits.vertices += h.vertices;
        hits.depth += h.depth;
    }
    Enumeration {
        p,
        limits,
        graphs,
        visited,
        hits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypermap::hypermap_of;

    #[test]
    fn seeds() {
        for p in 0..6 {
            let s = seed(p);
            assert_eq!(s.face_count(), 2);
            assert_eq!(s.vertex_count(), p as usize + 3);
            assert!(PlaneGraph::new(s.faces().to_vec()).is_ok());
            let h = hypermap_of(&s).unwrap();
            assert_eq!(h.dart_count(), 2 * (p as usize + 3));
            assert_eq!(h.euler_characteristic(), 2);
        }
    }

    #[test]
    fn index_lists_shape() {
        // size 3 on a triangle: [0,0,2], [0,1,2]
        assert_eq!(index_lists(3, 3), vec![vec![0, 0, 2], vec![0, 1, 2]]);
        // middle entries: multisets of size k from m−1 values
        assert_eq!(index_lists(5, 6).len(), 35);
    }

    #[test]
    fn seed0_step() {
        let succ = next_plane(&seed(0), 0).unwrap();
        let shown: Vec<String> = succ.iter().map(|g| g.to_string()).collect();
        assert_eq!(shown, ["[0,1,2] [0,3,1] [0,2,1,3]*", "[0,1,2] [0,2,1]"]);
        for g in &succ {
            assert!(PlaneGraph::new(g.faces().to_vec()).is_ok());
            assert_eq!(g.faces().iter().filter(|f| f.is_final).count(), 2);
        }
    }

    #[test]
    fn final_graph_has_no_successors() {
        let g = finalize_triangles(&seed(0));
        assert_eq!(next_plane(&g, 0), Err(HypermapError::FinalGraph));
    }

    #[test]
    fn chords_never_duplicate_edges() {
        let walk = Walk::new(1, Successors::Plane, Limits::vertices(6));
        for v in walk.take(3000) {
            let g = v.graph;
            assert!(PlaneGraph::new(g.faces().to_vec()).is_ok(), "{g}");
            let mut edges: Vec<(u32, u32)> = g.faces().iter().flat_map(|f| f.edges()).collect();
            let n = edges.len();
            edges.sort_unstable();
            edges.dedup();
            assert_eq!(edges.len(), n, "{g}");
        }
    }

    #[test]
    fn tame_finalizes_triangles_and_drops_big_faces() {
        for g in next_tame(&seed(0), 0, &FaceSizeBaseline).unwrap() {
            assert!(g.faces().iter().all(|f| f.is_final || f.len() > 3), "{g}");
        }
        // A 9-gon face fails the baseline.
        let nine: Vec<u32> = (0..9).collect();
        let g = PlaneGraph::from_final_faces(&[nine.clone(), nine.iter().rev().copied().collect()]).unwrap();
        assert!(!FaceSizeBaseline.is_tame(&g));
        assert!(AlwaysTame.is_tame(&g));
    }

    #[test]
    fn zero_graph_limit_is_empty() {
        let limits = Limits {
            max_vertices: 10,
            max_graphs: 0,
            max_depth: 10,
        };
        let e = enumerate(0, Successors::Plane, limits);
        assert!(e.graphs.is_empty());
        assert_eq!(e.visited, 0);
        assert!(e.hits.graphs);
    }

    #[test]
    fn parallel_matches_sequential() {
        let pred = FaceSizeBaseline;
        for (p, n) in [(0, 7), (1, 6), (2, 6)] {
            for succ in [Successors::Plane, Successors::Tame(&pred)] {
                let a = enumerate(p, succ, Limits::vertices(n));
                let b = enumerate_parallel(p, succ, Limits::vertices(n), 16);
                assert_eq!(a.graphs, b.graphs);
                assert_eq!(a.visited, b.visited);
                assert_eq!(a.hits, b.hits);
            }
        }
    }
}
