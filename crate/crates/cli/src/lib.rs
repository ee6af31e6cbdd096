//! Graph documents, DOT export and the command-line front end for
//! [`contact_loci_core`].
//!
//! The binary is a thin wrapper around [`run`]; everything it prints is
//! deterministic JSON (or DOT for `dot`).

pub mod app;
pub mod document;
pub mod dot;
pub mod error;
pub mod random;
pub mod render;
pub mod selftest;

pub use app::run;
pub use document::GraphDocument;
pub use dot::export_dot;
pub use error::CliError;
