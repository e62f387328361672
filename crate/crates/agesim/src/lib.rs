//! Discrete-time V2V network simulator in which every transmitter-receiver
//! pair runs a decentralized Gaussian-process learner over its own AoI
//! dynamics and proactively picks transmit power and resource blocks to
//! trade off AoI-violation risk against information gain.
//!
//! Modules follow the data flow: [`config`] loads and validates scenarios,
//! [`env`] moves vehicles and draws channels, [`link`] turns joint actions
//! into rates, queues, and ages, [`gpr`] learns the per-pair dynamics,
//! [`alloc`] scores and picks actions, [`engine`] orchestrates the slot
//! loop, and [`cli`] drives runs, comparisons, and sweeps from files.

pub mod alloc;
pub mod cli;
pub mod config;
pub mod engine;
pub mod env;
pub mod gpr;
pub mod link;
pub mod rng;
