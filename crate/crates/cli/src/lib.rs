//! Experiment harness around the `sconcave` core: config ingestion,
//! deterministic seed derivation, the experiment runners, and CSV output.
//!
//! The binary (`sconcave`) is a thin shell over [`runner`]; everything
//! with observable behavior lives here so integration tests can drive the
//! runners directly and compare against the CLI byte for byte.

pub mod config;
pub mod csvout;
pub mod runner;
pub mod seed;
