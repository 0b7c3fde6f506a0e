//! Command line and local JSON service for the Cayley-Bacharach engine.

pub mod api;
pub mod commands;
pub mod document;
pub mod server;

pub use commands::{run, Cli, Command, Outcome};
pub use document::{parse_document, PointsDocument};
