//! Membership in `G†`, the closure and non-member experiments, and reports.

pub mod cli;
pub mod experiment;
pub mod gdagger;

pub use experiment::{find_non_member, flip_closure_experiment, instance_hash, run_experiment, ExperimentRecord};
pub use gdagger::{gdagger_check, GDagger, GDaggerReport};
