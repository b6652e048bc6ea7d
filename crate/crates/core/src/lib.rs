//! Acyclic partitioning of directed hypergraphs.
//!
//! Splits a directed acyclic hypergraph (DAH) into `k` weight-balanced
//! blocks whose quotient graph stays acyclic, minimizing the connectivity
//! objective km1. The pipeline computes an initial acyclic partition
//! first, coarsens with contractions restricted to provably safe vertex
//! pairs, and refines with acyclicity-aware FM local search after every
//! single uncontraction. A steady-state memetic layer recombines and
//! mutates whole partitions via constrained V-cycles.

pub mod hypergraph;
pub mod partition;
pub mod quotient;
pub mod testkit;
pub mod toposort;

pub use hypergraph::{
    BuildError, ContractError, ContractMode, ContractionMemento, DirectedHypergraph, PinRole,
};
pub use partition::{
    balance_limit, verify_partition, Partition, PartitionError, PartitionReport,
};
pub use quotient::QuotientGraph;
pub use toposort::{is_acyclic, topological_order, toplevels, CyclicInput, Direction};
