//! Command-line driver and bundled reference tables for `og6-lattice`.

pub mod cli;
pub mod data;
pub mod render;
