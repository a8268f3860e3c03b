//! Filesystem persistence, the anchoring protocol and the `osc` command line
//! for ontological smart contracts.
//!
//! [`cas::FsStore`] keeps content-addressed objects and a small name service,
//! [`journal::LedgerFile`] persists the simulated ledger as JSON lines, and
//! [`protocol::Osc`] ties both to the core model: deploy a contract and its
//! validation query, deploy instances, fetch with integrity checks, validate.

pub mod cas;
pub mod config;
pub mod journal;
pub mod output;
pub mod protocol;

mod fsutil;
