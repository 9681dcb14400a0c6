//! Seeded law suites: instance generators, per-law checks, reports and replay.

pub mod checks;
pub mod generate;
pub mod laws;
pub mod report;

pub use checks::{check, generate as generate_instance};
pub use generate::{gen_polytope, PolytopeRequest, Shape};
pub use laws::{CertificateCase, Instance, Law, Mutation, Outcome, Payload};
pub use report::{replay, run_suite, Counterexample, InstanceRecord, Replay, RunOptions, SuiteReport, SuiteSummary};
