//! Solver core for the Far From Most String Problem (FFMSP).
//!
//! Given `n` strings of length `m` over an alphabet and a distance threshold
//! `d`, the task is to find a string that is at Hamming distance `>= d` from
//! as many input strings as possible.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! - [`problem`]: instances, candidate strings, the exact objective and
//!   incrementally maintained distance profiles.
//! - [`heuristic`]: the likelihood-weighted surrogate objective `h` that
//!   refines `f` with a "gain per change" term, backed by precomputed tables.
//! - [`construct`]: GRASP randomized-greedy construction.
//! - [`operators`]: path relinking, uniform crossover, mutation and hill
//!   climbing over `h`.
//! - [`engine`]: the memetic algorithm and an iterated GRASP + hill climbing
//!   baseline.
//!
//! Wall-clock budgets need a [`budget::Clock`]; the std companion crate
//! provides one. Evaluation-count budgets work everywhere and are fully
//! deterministic.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod budget;
pub mod construct;
pub mod engine;
pub mod error;
pub mod heuristic;
pub mod operators;
pub mod problem;
pub mod rng;

pub use error::{Error, Result};
