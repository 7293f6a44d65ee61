//! Library side of the experiment harness: configuration, suite runner,
//! deterministic records, report rendering and SVG plots.

pub mod config;
pub mod record;
pub mod report;
pub mod runner;
pub mod svg;
