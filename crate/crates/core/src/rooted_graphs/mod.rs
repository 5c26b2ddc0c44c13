//! Canonical forms, truncation and structural operations for finite rooted
//! graphs and rooted trees.

mod class;
mod general;
mod graph;

pub use class::{canonicalize, CanonicalClass, ClassKind, GENERAL_PREFIX};
pub use graph::{Graph, LabeledRootedGraph};
