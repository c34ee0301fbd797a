//! Stochastic linear bandits with budget-constrained adversarial reward corruption.
//!
//! The crate is `no_std` (it needs `alloc`) and holds the numerical parts:
//!
//! - [`instances`]: arm sets, hidden parameters, noise and context models,
//!   synthetic generators and the lower-bound fixtures.
//! - [`design`]: near G-optimal experimental designs via Frank-Wolfe.
//! - [`learners`]: Robust Phased Elimination (known / unknown budget, theoretical and
//!   practical parameterisations), non-robust PE, contextual greedy, LinUCB and
//!   linear Thompson sampling.
//! - [`adversaries`]: reward-corruption attacks sharing a clipping budget ledger.
//! - [`harness`]: the round-by-round interaction protocol, regret traces and
//!   multi-trial aggregation.
//!
//! IO, configuration files and the command line live in the `linbandit` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod adversaries;
pub mod design;
mod error;
pub mod harness;
pub mod instances;
pub mod learners;
pub mod linalg;
pub mod rng;

pub use error::{Error, Result};
pub use linalg::Vector;
