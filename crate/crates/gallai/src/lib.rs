//! Toolkit for lower-bound certificates on complete uniform hypergraphs.
//!
//! A *witness* is an edge coloring of the complete r-uniform hypergraph on n
//! vertices that avoids, for each color i, a monochromatic copy of a small
//! target (a complete hypergraph or a complete hypergraph minus one edge).
//! Such a coloring certifies a Ramsey-style lower bound; if it additionally
//! contains no rainbow simplex (r+1 vertices whose r+1 hyperedges are pairwise
//! distinctly colored) it certifies a Gallai-Ramsey lower bound.
//!
//! The crate provides the standard constructions that manufacture witnesses
//! from smaller ones ([`construct`]), exhaustive verification ([`verify`]),
//! backtracking search over small orders ([`search`]), a text certificate
//! format ([`certificate`]), and a registry of known bounds with derivation
//! rules ([`bounds`]). Hyperedges are everywhere addressed by colexicographic
//! rank ([`colex`]).

pub mod bounds;
pub mod certificate;
pub mod chromatic;
pub mod colex;
pub mod construct;
pub mod error;
pub mod hypergraph;
pub mod search;
pub mod verify;

pub use error::{Error, Result};
pub use hypergraph::{ColoredCompleteHypergraph, Hypergraph, PatternKind, TargetPattern};
