//! Numerical laboratory for non-autonomous sesquilinear forms on weighted
//! L^2 spaces: discrete Gelfand triples over graded meshes, subspace form
//! extensions with certified bounds, explicit oscillatory trajectories, and
//! a theta-scheme solver with energy and maximal-regularity diagnostics.
//!
//! All types are immutable after construction; assembly and evaluation are
//! pure functions, safe to share across threads.

pub mod error;
pub mod extension;
pub mod linalg;
pub mod mesh;
pub mod quadrature;
pub mod spaces;

pub use error::{Error, Result};
pub use extension::{
    extend_accretive, extend_form, extend_selfadjoint, riesz_map, trivial_extension,
    BoundCertificate, ExtensionConfig, ExtensionMode, FormOperator, PartialForm, RangeBounds,
    RangeSample,
};
pub use mesh::Mesh;
pub use spaces::{
    assemble_gram, dual_pairing, inner, norm, random_grid_function, random_unit, GramSet,
    GridFunction, WeightSpec,
};
