//! Directed cycle double covers of cubic bridgeless graphs.
//!
//! Two independent construction routes and the machinery to cross-validate
//! them at desk scale:
//!
//! * the embedding route: hexagon graphs, blue perfect matchings, rotation
//!   systems, face tracing and dual-loop-free embeddings ([`hexagon`],
//!   [`embedding`]);
//! * the reduction route: mixed graphs and pseudohexes with safe reductions
//!   over fork-graph building sequences ([`mixed`], [`pseudohex`], [`fork`],
//!   [`pipeline`]).
//!
//! The crate is `no_std` (alloc only); IO, file formats and the CLI live in
//! the companion `dcdc-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod catalog;
pub mod embedding;
pub mod fork;
pub mod graph;
pub mod graph6;
pub mod hexagon;
pub mod iso;
pub mod matching;
pub mod mixed;
pub mod pipeline;
pub mod pseudohex;

pub use graph::CubicGraph;
pub use hexagon::HexagonGraph;
