//! Staged group constructions driven by computably enumerable sets.
//!
//! Recursive presentations and atomic diagrams are built stage by stage from a
//! [`cesets::Scenario`]; bounded checkers evaluate group-theoretic properties on
//! the finite approximations, and [`orders`] probes orderability.

pub mod cesets;
pub mod checkers;
pub mod diagrams;
pub mod harness;
pub mod orders;
pub mod presentations;
pub mod reductions;
pub mod words;
