//! Finite stage graphs approximating an inverse-limit path space, together
//! with homomorphism extension, parity two-colorings and directed-distance
//! machinery on oriented forests.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod antibasis;
pub mod coloring;
pub mod graph;
pub mod hom;
pub mod metrics;
pub mod params;
pub mod stage;
pub mod vertex;

pub use graph::{FiniteGraph, GraphError, StageMeta};
pub use params::{DirectionWord, OddPair, OddSequence, ParamError};
pub use vertex::{Tail, Vertex};
