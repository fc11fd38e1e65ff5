//! Exact-arithmetic toolkit for horizontally periodic translation surfaces.
//!
//! A surface is presented as a cylinder diagram: a list of horizontal
//! cylinders with labeled top/bottom boundary words, exact heights and
//! twists over a real quadratic field Q(sqrt(d)). On top of that the crate
//! implements the deformation machinery for rank-one rel-one loci: the rel
//! direction built from cylinder-graph parities, exact motion along it with
//! cylinder collapse and continuation through the degeneration, standard
//! position for saddle connections, vertical flow decomposition, rational
//! relation spaces of moduli and reciprocal circumferences, and verification
//! of branched translation covers of three-cylinder genus-two surfaces.
//!
//! Everything is computed exactly; no floating point enters any predicate.

pub mod scalar;
pub mod linalg;
pub mod diagram;
pub mod canonical;
pub mod involution;
pub mod format;
pub mod deform;
pub mod surgery;
pub mod flow;
pub mod relations;
pub mod cover;
pub mod fixtures;
pub mod render;
pub mod trace;
pub mod cli;

pub use diagram::{CylinderDiagram, CylinderSpec, ValidationReport};
pub use scalar::FieldScalar;
