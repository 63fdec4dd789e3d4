//! JSON documents, DOT rendering, seeded corpora and the `lzero` command line
//! on top of `lzero-core`.

pub mod cli;
pub mod corpus;
pub mod doc;
pub mod dot;

pub use cli::{run, run_with};
