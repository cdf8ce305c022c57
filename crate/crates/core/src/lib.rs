//! Orbit partitions and automorphism generators of edge-colored digraphs.
//!
//! A graph here is any coloring of the ordered vertex pairs `V x V`: the
//! diagonal carries vertex colors, off-diagonal entries carry arc colors.
//! Undirected simple graphs are the special case with a symmetric matrix
//! over three colors.
//!
//! The engine individualizes vertices until the stable Weisfeiler-Leman
//! coloring sits one step away from discrete, groups the discrete children
//! by canonical form, and joins the resulting automorphic partitions. Every
//! emitted generator is checked against the input matrix, and a run is
//! certified when the accumulated partition meets the stable coloring from
//! below.
//!
//! ```
//! use orbitfix_core::{compute_orbits, families, EngineConfig, Status};
//!
//! let petersen = families::petersen();
//! let system = compute_orbits(&petersen, &EngineConfig::default()).unwrap();
//! assert_eq!(system.partition.len(), 1);
//! assert_eq!(system.status, Status::Certified);
//! ```

pub mod assembly;
pub mod engine;
mod error;
pub mod families;
mod fingerprint;
pub mod formats;
pub mod model;
pub mod oracle;
pub mod refine;

pub use engine::{
    canonical_form_discrete, compute_orbits, extract_isomorphism, find_regular_stage, iso_test,
    pick_fix_vertex, stage_orbits, verify_merge, EngineConfig, FixHistory, IsoOutcome, IsoVerdict,
    OrbitSystem, RunStats, StageGraph, Status, Strategy,
};
pub use error::{Error, Result};
pub use model::{
    apply_permutation, is_automorphism, is_discrete, is_finer_or_equal, is_isomorphism,
    normalize_colors, partition_join, ClassId, ColorId, EdgeColoredGraph, OrderedPartition,
    Permutation, VertexId,
};
pub use refine::{individualize, refine, refine_with_fixes, Dim, RefinementConfig, StableColoring};
