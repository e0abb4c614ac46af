//! Command-line laboratory for the `isoradial` crate: configuration,
//! artifact output (CSV, JSON, SVG, angular-set text), seeded random test
//! sets and the randomized property suites.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod generators;
pub mod io;
pub mod suites;

pub use error::LabError;
