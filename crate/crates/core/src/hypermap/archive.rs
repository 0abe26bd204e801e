//! Archives of final plane graphs and their comparison modulo isomorphism.
//!
//! Text format, one graph per line: `label F n1 v.. n2 v.. ..` where `F` is
//! the face count and each face is its length followed by its vertices.
//! Blank lines and lines starting with `#` are skipped. A JSON document
//! `{"format": "rigorkit.archive/1", "graphs": [{"label", "faces"}]}` is
//! accepted as well.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::graph::{PlaneGraph, Vertex};
use super::iso::{canonical_form, CanonicalForm};
use super::HypermapError;

pub const ARCHIVE_FORMAT: &str = "rigorkit.archive/1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveEntry {
    pub label: String,
    pub graph: PlaneGraph,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Archive {
    pub entries: Vec<ArchiveEntry>,
}

#[derive(Serialize, Deserialize)]
struct JsonEntry {
    label: String,
    faces: Vec<Vec<Vertex>>,
}

#[derive(Serialize, Deserialize)]
struct JsonArchive {
    format: String,
    graphs: Vec<JsonEntry>,
}

impl Archive {
    /// Final graphs labeled `{prefix}{index}`.
    pub fn from_graphs(prefix: &str, graphs: &[PlaneGraph]) -> Result<Archive, HypermapError> {
        let entries = graphs
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if !g.is_final() {
                    return Err(HypermapError::Malformed(format!("graph {i} is not final")));
                }
                Ok(ArchiveEntry {
                    label: format!("{prefix}{i}"),
                    graph: g.clone(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Archive { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(text: &str) -> Result<Archive, HypermapError> {
        if text.trim_start().starts_with('{') {
            Archive::parse_json(text)
        } else {
            Archive::parse_text(text)
        }
    }

    pub fn parse_text(text: &str) -> Result<Archive, HypermapError> {
        let mut entries = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |m: String| HypermapError::Parse {
                line: ln + 1,
                message: m,
            };
            let mut tok = line.split_whitespace();
            let label = tok.next().expect("nonempty line").to_string();
            let mut num = |what: &str| -> Result<u32, HypermapError> {
                let t = tok.next().ok_or_else(|| err(format!("missing {what}")))?;
                t.parse().map_err(|_| err(format!("bad {what} `{t}`")))
            };
            let nf = num("face count")?;
            let mut faces = Vec::new();
            for _ in 0..nf {
                let len = num("face length")?;
                let vs = (0..len).map(|_| num("vertex")).collect::<Result<Vec<_>, _>>()?;
                faces.push(vs);
            }
            if tok.next().is_some() {
                return Err(err("trailing tokens".into()));
            }
            let graph = PlaneGraph::from_final_faces(&faces).map_err(|e| err(e.to_string()))?;
            entries.push(ArchiveEntry { label, graph });
        }
        Ok(Archive { entries })
    }

    pub fn parse_json(text: &str) -> Result<Archive, HypermapError> {
        let j: JsonArchive = serde_json::from_str(text).map_err(|e| HypermapError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if j.format != ARCHIVE_FORMAT {
            return Err(HypermapError::Parse {
                line: 1,
                message: format!("unknown format `{}`", j.format),
            });
        }
        let entries = j
            .graphs
            .into_iter()
            .map(|e| {
                let graph = PlaneGraph::from_final_faces(&e.faces).map_err(|err| HypermapError::Parse {
                    line: 0,
                    message: format!("{}: {err}", e.label),
                })?;
                Ok(ArchiveEntry { label: e.label, graph })
            })
            .collect::<Result<_, _>>()?;
        Ok(Archive { entries })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            write!(s, "{} {}", e.label, e.graph.face_count()).unwrap();
            for f in e.graph.faces() {
                write!(s, " {}", f.len()).unwrap();
                for v in &f.vertices {
                    write!(s, " {v}").unwrap();
                }
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let j = JsonArchive {
            format: ARCHIVE_FORMAT.into(),
            graphs: self
                .entries
                .iter()
                .map(|e| JsonEntry {
                    label: e.label.clone(),
                    faces: e.graph.faces().iter().map(|f| f.vertices.clone()).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }

    /// First representative of every isomorphism class, in order.
    pub fn reduced(&self) -> Archive {
        let mut seen = std::collections::HashSet::new();
        Archive {
            entries: self
                .entries
                .iter()
                .filter(|e| seen.insert(canonical_form(&e.graph)))
                .cloned()
                .collect(),
        }
    }
}

/// One isomorphism class present in both archives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Matched {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ArchiveDiff {
    /// Labels of `a` whose class does not occur in `b`.
    pub only_a: Vec<String>,
    pub only_b: Vec<String>,
    pub matched: Vec<Matched>,
}

impl ArchiveDiff {
    pub fn is_equivalent(&self) -> bool {
        self.only_a.is_empty() && self.only_b.is_empty()
    }

    /// Classes that hold more than one graph on either side.
    pub fn duplicates(&self) -> usize {
        self.matched.iter().filter(|m| m.a.len() > 1 || m.b.len() > 1).count()
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "matched classes: {}  only in a: {}  only in b: {}  classes with duplicates: {}",
            self.matched.len(),
            self.only_a.len(),
            self.only_b.len(),
            self.duplicates()
        )
        .unwrap();
        for l in &self.only_a {
            writeln!(s, "< {l}").unwrap();
        }
        for l in &self.only_b {
            writeln!(s, "> {l}").unwrap();
        }
        for m in self.matched.iter().filter(|m| m.a.len() > 1 || m.b.len() > 1) {
            writeln!(s, "= {} | {}", m.a.join(" "), m.b.join(" ")).unwrap();
        }
        s
    }
}

/// Partition both archives by isomorphism class. Classes are reported in
/// order of first appearance in `a`, then in `b`.
pub fn archive_diff(a: &Archive, b: &Archive) -> ArchiveDiff {
    let mut index: HashMap<CanonicalForm, usize> = HashMap::new();
    let mut classes: Vec<(Vec<String>, Vec<String>)> = Vec::new();
    for (side, ar) in [(0, a), (1, b)] {
        for e in &ar.entries {
            let k = *index.entry(canonical_form(&e.graph)).or_insert_with(|| {
                classes.push((vec![], vec![]));
                classes.len() - 1
            });
            let c = &mut classes[k];
            if side == 0 { &mut c.0 } else { &mut c.1 }.push(e.label.clone());
        }
    }
    let mut d = ArchiveDiff::default();
    for (la, lb) in classes {
        match (la.is_empty(), lb.is_empty()) {
            (false, true) => d.only_a.extend(la),
            (true, false) => d.only_b.extend(lb),
            _ => d.matched.push(Matched { a: la, b: lb }),
        }
    }
    d
}
