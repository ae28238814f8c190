//! Homomorphism, retraction and near-unanimity polymorphism decisions for
//! small graphs and digraphs over a fixed template.

pub mod canon;
pub mod colored;
pub mod error;
pub mod format;
pub mod generate;
pub mod graph;
pub mod hom;
pub mod nu;
pub mod obstruction;
pub mod report;

pub use colored::{canonical_template, ColoredGraph, SubstructureDelta};
pub use error::{Error, Result};
pub use graph::{Digraph, Vertex};
pub use hom::{find_homomorphism, find_retraction, Homomorphism, SearchOutcome};
pub use nu::NuWitness;
pub use report::{Certificate, RunReport, RunStatus};
