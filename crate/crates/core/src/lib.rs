//! Exact decision procedures for one-dimensional sofic shifts.
//!
//! Given a labelled-graph presentation, the library decides whether the shift is a
//! topological Markov field, whether it is non-wandering, whether it is a topological
//! Markov chain, and assembles these into a single classification. The [`measure`]
//! module adds exact-rational stationary Markov chains and hidden-Markov measures with
//! finite-window checks of the Markov and Markov-random-field properties.

pub mod bits;
pub mod classify;
pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod graph;
pub mod language;
pub mod measure;
pub mod monoid;
pub mod presentation;
pub mod report;

pub use config::Limits;
pub use error::{Error, Result};
pub use format::{load_presentation, recode_to_tmc};
pub use presentation::{Presentation, Word};
