//! Experiment runner behind the `radiomap` binary.

pub mod commands;
pub mod output;
pub mod svg;
pub mod validate;
