//! Library half of the `belyi` binary: the report shape printed by the
//! newton subcommand, the persistent height table, and the SVG rendering.
//! Kept out of main so integration tests can reach them directly.

pub mod report;
pub mod svg;
pub mod table;
