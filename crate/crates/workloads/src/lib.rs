//! Reference workloads for the benchmarking harness.
//!
//! Three programs with deliberately different performance profiles:
//!
//! * `noop` — prints a fixed greeting and exits; measures bare startup cost.
//! * `mtree` — builds and hashes perfect binary trees on a depth schedule;
//!   allocation- and traversal-bound compute.
//! * `deargon` — recovers a short lowercase secret by exhaustively verifying
//!   Argon2 hashes; memory-hard, RNG-free crypto compute.
//!
//! Every workload is single-threaded and fully deterministic, so repeated
//! runs are directly comparable.

pub mod deargon;
pub mod mtree;
