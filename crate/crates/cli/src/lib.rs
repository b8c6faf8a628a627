//! Experiment harness for the tuning toolkit: spec resolution, seeded
//! repeat execution, results/trace files, and the comparison and report
//! pipeline behind the `mmo` binary.

pub mod calibrate;
pub mod cli;
pub mod compare;
pub mod genland;
pub mod report;
pub mod results;
pub mod run;
pub mod source;
pub mod spec;
pub mod sweep;
