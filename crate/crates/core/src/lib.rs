//! Sparse random graph machinery: canonical rooted neighborhoods, unimodular
//! Galton-Watson trees with a prescribed depth-h neighborhood law, the colored
//! configuration model with exact counting, and the entropy functionals and
//! large-deviation rate functions built on top of them.
//!
//! Exact quantities (laws derived from finite graphs or finite recursions,
//! configuration-model probabilities, counts) are carried as big rationals so
//! they can be compared for equality against the brute-force enumerators in
//! [`oracle`]. Poisson-type laws with infinite support use `f64` weights and a
//! recorded tail truncation.

pub mod combinatorics;
pub mod config_model;
pub mod entropy;
pub mod error;
pub mod experiments;
pub mod io;
pub mod neighborhood;
pub mod oracle;
pub mod rooted_graphs;
pub mod tree_encoding;
pub mod ugw;
pub mod weight;

pub use error::{Error, Result};
pub use neighborhood::NeighborhoodLaw;
pub use rooted_graphs::{CanonicalClass, ClassKind, Graph, LabeledRootedGraph};
pub use num_bigint::BigUint;
pub use num_rational::BigRational;
pub use weight::Weight;

/// Schema tag carried by every JSON document this crate writes.
pub const SCHEMA: &str = "ugw-ldp/v1";
