//! Distinguishability analysis and runtime monitors for hidden Markov
//! chains.
//!
//! The library decides whether two hidden Markov chains can be told apart
//! from a single observation stream, computes the profile constant `c` and
//! test set that calibrate the monitors' error bounds, and runs four
//! monitors over observation streams: a two-sided likelihood monitor, a
//! bounded-random-walk variant, a one-sided alarm monitor, and a multi-way
//! classifier. A runtime-verification layer splits a single chain with
//! classified bottom components into conditioned good/bad chains and
//! decides monitorability.
//!
//! All decision procedures use exact rational arithmetic; only the
//! long-stream trackers and the planners use floating point.

pub mod corpus;
pub mod distinguish;
pub mod exact;
pub mod forward;
pub mod model;
pub mod monitors;
pub mod rv;
