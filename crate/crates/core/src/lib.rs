//! Block designs, their (S-)block intersection graphs and existential
//! closure.
//!
//! The crate builds pairwise balanced designs, λ-fold triple systems and
//! Steiner quadruple systems ([`constructions`]), validates them
//! ([`design`]), turns them into dense bitset graphs ([`graph`]) and decides
//! the n-e.c. adjacency property on those graphs ([`ec`]). [`analysis`]
//! holds the exact arithmetic on intersection numbers and design
//! parameters; [`suite`] bundles the end-to-end checks run by the CLI.

pub mod analysis;
pub mod arith;
pub mod bitset;
pub mod cli;
pub mod constructions;
pub mod design;
pub mod ec;
pub mod graph;
pub mod io;
pub mod report;
pub mod suite;

pub use design::{Design, DesignError, ValidationReport};
pub use ec::{EcFailure, EcResult, Xi};
pub use graph::Graph;
