//! Connectivity-preserving control of mobile agent networks under link
//! jamming and position spoofing, plus solvers for coupled cloud-security
//! games.
//!
//! * [`graph`]: proximity graphs, algebraic connectivity and its gradient.
//! * [`adversary`]: worst-case link removal and reported-position spoofing.
//! * [`controller`]: one max-min planning step, centralized or local.
//! * [`simulator`]: the plan, move, attack loop and resilience metrics.
//! * [`games`]: takeover game, trust game, plant-derived payoffs and their
//!   coupled fixed point.
//! * [`scenario`] and [`cli`]: file formats and the `rescon` tool.

pub mod adversary;
pub mod cli;
pub mod controller;
pub mod games;
pub mod graph;
pub mod scenario;
pub mod simulator;
