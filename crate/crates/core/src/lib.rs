//! Rank-ordered word probabilities of absorbing Markov chains.
//!
//! A chain emits the word of transient states it visits before absorption.
//! Sorting all words by probability gives `p(1) ≥ p(2) ≥ …`; this crate
//! classifies the decay of `p(t)` from the chain's graph, computes the
//! governing exponents, and generates `p(t)` exactly for checking.

pub mod asymptotics;
pub mod chain;
pub mod cli;
pub mod enumerate;
pub mod error;
pub mod figures;
pub mod graph;
pub mod regime;
pub mod selftest;
pub mod spectral;

pub use chain::{ChainSpec, ValidationReport, Word};
pub use error::{Error, Result};
pub use regime::{classify, AnalysisConfig, Regime, RegimeReport};
