//! Plane graphs as oriented face lists, their hypermaps, the seed-and-split
//! enumeration with a tameness filter, isomorphism and archive comparison.

mod archive;
mod enumerate;
mod graph;
mod iso;

pub use archive::{archive_diff, Archive, ArchiveDiff, ArchiveEntry, Matched, ARCHIVE_FORMAT};
pub use enumerate::{
    anchor_face, enumerate, enumerate_parallel, finalize_triangles, next_plane, next_tame, seed, AlwaysTame,
    Enumeration, FaceSizeBaseline, LimitHits, Limits, Successors, TamenessPredicate, Visit, Walk,
};
pub use graph::{cycle_count, euler_characteristic, hypermap_of, Face, Hypermap, PlaneGraph, Vertex};
pub use iso::{
    canonical_form, canonical_form_oriented, canonical_graph, fingerprint, isomorphic, isomorphic_oriented,
    CanonicalForm, Fingerprint,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HypermapError {
    #[error("malformed face structure: {0}")]
    Malformed(String),
    #[error("graph is final; nothing to subdivide")]
    FinalGraph,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
