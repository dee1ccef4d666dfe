//! File formats, SVG output and the command-line front end for `llg-core`.

pub mod cli;
pub mod formats;
pub mod svg;
