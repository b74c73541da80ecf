//! File ingestion, reporting, and lifecycle scripting for the fracbid
//! command-line tool. The binary in `main.rs` is a thin argument layer
//! over [`commands`].

pub mod commands;
pub mod input;
pub mod report;
pub mod script;
