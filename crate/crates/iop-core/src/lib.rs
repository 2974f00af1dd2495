//! Multiobjective optimization of infrastructure deployment configurations.
//!
//! The pipeline: parse an `optimization` block written in the DOML surface
//! syntax, combine it with an infrastructural element catalog into an
//! integer-encoded constrained multiobjective problem, solve it with one of
//! five evolutionary algorithms, and compare solvers through hypervolume
//! indicators and Friedman rank statistics.

pub mod algorithms;
pub mod bench;
pub mod catalog;
pub mod doml;
pub mod metrics;
pub mod moea;
pub mod problem;
pub mod stats;

pub use algorithms::{AlgorithmId, RunConfig, RunResult};
pub use catalog::{Catalog, CatalogElement, ElementType};
pub use doml::{ObjectiveSpec, OptimizationSpec, RequirementSpec};
pub use moea::{Individual, RandomSource, VariationConfig};
pub use problem::{Evaluation, Genotype, ProblemInstance};
