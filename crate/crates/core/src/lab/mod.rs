//! Example spaces, experiment runner and reports.

pub mod examples;
pub mod experiment;
pub mod emit;
pub mod table;
