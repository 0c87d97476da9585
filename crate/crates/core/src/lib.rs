//! Domain-level simulator and analysis toolkit for renewable DNA
//! hairpin-seesaw gates.
//!
//! The crate models the motif's reaction network at domain granularity,
//! integrates its mass-action kinetics under timed injection protocols
//! (renewal cycles and a 2-input OR gate), fits the universal rate constant
//! by maximum likelihood, and designs three-letter-code sequences for the
//! domain catalog.
//!
//! Modules follow the pipeline:
//!
//! - [`domain`] / [`complex`]: strands, domains, multi-strand complexes
//! - [`motif`]: curated motif and OR-gate networks plus injection schedules
//! - [`enumerate`]: generic displacement rule engine, cross-checks the curated set
//! - [`kinetics`] / [`ssa`]: deterministic ODE integration and a Gillespie oracle
//! - [`fit`]: maximum-likelihood rate estimation
//! - [`seqdesign`]: sequence assignment under the three-letter code
//! - [`config`]: structured text configs, trace CSV, fit reports

pub mod complex;
pub mod config;
pub mod domain;
pub mod enumerate;
pub mod error;
pub mod fit;
pub mod kinetics;
pub mod motif;
pub mod network;
pub mod schedule;
pub mod seqdesign;
pub mod solver;
pub mod ssa;

pub use error::{Error, Result};
