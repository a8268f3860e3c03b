//! Core model for ontological smart contracts.
//!
//! Everything here is pure and allocation-only: RDF terms and graphs with
//! their textual syntaxes, the conditional/contract vocabulary, conditional
//! evaluation, the basic-graph-pattern query engine, content identifiers, the
//! anchoring ledger and its storage-cost model. Filesystem persistence and the
//! command-line surface live in the `oasis-osc` crate.
#![no_std]

extern crate alloc;

pub mod cid;
pub mod cost;
pub mod decimal;
pub mod engine;
pub mod graph;
pub mod ledger;
pub mod model;
pub mod query;
pub mod scenario;
pub mod syntax;
pub mod term;
pub mod verdict;
pub mod vocab;

pub use cid::Cid;
pub use decimal::Decimal;
pub use graph::{Graph, Triple, TriplePattern};
pub use term::{Iri, Literal, Term};
pub use vocab::Vocabulary;
