//! Near-triangulations, exact total domination solvers, and a constructive
//! solver certifying a floor(2n/5)-size total dominating set for every
//! near-triangulation of order at least 5 apart from two order-12 graphs.

pub mod cert;
pub mod embedding;
pub mod generators;
pub mod mop_solver;
pub mod oracle;

pub use cert::{budget, CaseId, ReductionStep, TdsCertificate};
pub use embedding::{
    canonical_form, from_faces, is_exception, parse, serialize, to_dot, Face, GraphClass,
    NearTriangulation, VertexId,
};
pub use generators::{Family, GeneratorSpec};

pub mod surgery;
pub mod decomposition;
pub mod constructor;
