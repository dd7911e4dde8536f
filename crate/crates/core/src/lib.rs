//! Exact simulation of constructions on left-c.e. reals, prefix-free machines
//! and semi-measures.

pub mod bits;
pub mod cli;
pub mod diag_diff;
pub mod diag_machine;
pub mod dyadic;
pub mod fixtures;
pub mod jsonl;
pub mod kraft_chaitin;
pub mod machines;
pub mod omega_diff;
pub mod report;
pub mod semimeasures;
pub mod streams;
pub mod trace;
