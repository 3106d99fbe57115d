//! Single-pass streaming algorithms for Max-SAT and Min-SAT.

pub mod cnf;
pub mod hardness;
pub mod harness;
pub mod maxsat;
pub mod minsat;
pub mod samplers;
pub mod space;
