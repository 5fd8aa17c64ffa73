//! Continuous-time quantum walk search on graphs.
//!
//! The crate builds the graph families used to study how connectivity
//! relates to search speed, measures four notions of connectivity (vertex,
//! edge, algebraic, normalized algebraic), simulates Schrödinger-picture
//! search dynamics under piecewise-constant jumping-rate schedules, and
//! checks the numerics against closed-form degenerate-perturbation-theory
//! predictions.
//!
//! Modules:
//! - [`graph`]: graph families, matrices, JSON/edge-list serialization.
//! - [`connectivity`]: the four connectivity measures via max flow and
//!   dense eigendecomposition.
//! - [`spectral`]: symmetric eigendecomposition and the equitable-partition
//!   reduction to the low-dimensional invariant subspace.
//! - [`dynamics`]: search Hamiltonians, exact piecewise evolution,
//!   jumping-rate sweeps, and peak extraction.
//! - [`oracle`]: closed-form predictions and schedule generation.

pub mod connectivity;
pub mod dynamics;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};
